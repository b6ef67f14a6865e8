#include "scmkit/report.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "scmkit/errors.hpp"

namespace scmkit {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

bool CheckResult::operator==(const CheckResult& o) const {
  const bool same_stat =
      (std::isnan(statistic) && std::isnan(o.statistic)) || statistic == o.statistic;
  return same_stat && pass == o.pass;
}

void ContextReport::compute_pass_rates() {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& img : images) {
    for (const auto& [name, check] : img.checks) {
      auto& [passed, total] = tally[name];
      ++total;
      if (check.pass) ++passed;
    }
  }
  for (const auto& [name, counts] : tally) {
    aggregates["pass_rate." + name] =
        counts.second == 0 ? 0.0
                           : static_cast<double>(counts.first) / static_cast<double>(counts.second);
    aggregates["evaluated." + name] = static_cast<double>(counts.second);
  }
}

void ContextReport::validate() const {
  for (const auto& img : images) {
    for (const auto& [name, check] : img.checks) {
      if (!aggregates.contains("pass_rate." + name)) {
        throw AnalysisError("check '" + name + "' missing from aggregates");
      }
    }
  }
  for (const auto& [name, value] : aggregates) {
    if (name.starts_with("pass_rate.") && !(value >= 0.0 && value <= 1.0)) {
      throw AnalysisError("aggregate " + name + " outside [0,1]");
    }
  }
}

std::string serialize_report(const ContextReport& report) {
  json images = json::array();
  for (const auto& img : report.images) {
    json checks = json::object();
    for (const auto& [name, c] : img.checks) {
      checks[name] = {{"statistic", number_or_null(c.statistic)}, {"pass", c.pass}};
    }
    json values = json::object();
    for (const auto& [name, v] : img.values) values[name] = number_or_null(v);
    images.push_back({{"file", img.file}, {"checks", std::move(checks)}, {"values", std::move(values)}});
  }
  json aggregates = json::object();
  for (const auto& [name, v] : report.aggregates) aggregates[name] = number_or_null(v);

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["model_id"] = std::string(to_string(report.model));
  doc["run_config"] = json::parse(report.run_config_json);
  doc["aggregates"] = std::move(aggregates);
  doc["notes"] = report.notes;
  doc["images"] = std::move(images);
  return doc.dump(1) + "\n";
}

ContextReport parse_report(std::string_view text, const std::string& origin) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw AnalysisError(origin + ": unsupported schema_version");
    }
    ContextReport r;
    r.model = parse_model_id(doc.at("model_id").get<std::string>());
    r.run_config_json = doc.contains("run_config") ? doc["run_config"].dump() : "{}";
    for (const auto& [k, v] : doc.at("aggregates").items()) r.aggregates[k] = number_from(v);
    if (doc.contains("notes")) r.notes = doc["notes"].get<std::vector<std::string>>();
    for (const auto& img : doc.at("images")) {
      ImageResult ir;
      ir.file = img.at("file").get<std::string>();
      for (const auto& [k, c] : img.at("checks").items()) {
        ir.checks[k] = CheckResult{number_from(c.at("statistic")), c.at("pass").get<bool>()};
      }
      if (img.contains("values")) {
        for (const auto& [k, v] : img["values"].items()) ir.values[k] = number_from(v);
      }
      r.images.push_back(std::move(ir));
    }
    return r;
  } catch (const json::exception& e) {
    throw AnalysisError(origin + ": malformed report: " + e.what());
  } catch (const ConfigError& e) {
    throw AnalysisError(origin + ": " + e.what());
  }
}

}  // namespace scmkit
