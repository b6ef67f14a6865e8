#include "scmkit/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scmkit/errors.hpp"

namespace scmkit {

using nlohmann::json;

namespace {

json to_json(const AnalysisConfig& c) {
  json tissues = json::array();
  for (const auto& t : c.compare.features.tissues.tissues) {
    tissues.push_back({{"name", t.name}, {"lo", t.lo}, {"hi", t.hi}});
  }
  json offsets = json::array();
  for (const auto& [dy, dx] : c.compare.features.glcm.offsets) offsets.push_back({dy, dx});

  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["alphabet"] = {{"match_threshold", c.alphabet.match.match_threshold},
                     {"gof_alpha", c.alphabet.match.gof_alpha},
                     {"glyph_dir", c.alphabet.glyph_dir}};
  doc["voronoi"] = {{"sauvola_window", c.voronoi.extract.sauvola.window},
                    {"sauvola_k", c.voronoi.extract.sauvola.k},
                    {"sauvola_r", c.voronoi.extract.sauvola.r},
                    {"min_region_area", c.voronoi.extract.min_region_area},
                    {"class_tolerance", c.voronoi.class_tolerance},
                    {"rho_threshold", c.voronoi.rho_threshold},
                    {"class_gof_alpha", c.voronoi.class_gof_alpha}};
  doc["flag"] = {{"pattern_file", c.flag.pattern_file},
                 {"fg_boundary", c.flag.fg_boundary},
                 {"rmae_bound", c.flag.rmae_bound},
                 {"moran_alpha", c.flag.moran_alpha},
                 {"tile_pass_fraction", c.flag.tile_pass_fraction},
                 {"gof_bins", c.flag.gof_bins},
                 {"gof_alpha", c.flag.gof_alpha}};
  doc["compare"] = {{"tissues", tissues},
                    {"glcm_levels", c.compare.features.glcm.levels},
                    {"glcm_offsets", offsets},
                    {"pairs", c.compare.pairs},
                    {"components", c.compare.components},
                    {"k_neighbors", c.compare.k_neighbors},
                    {"seed", c.compare.seed}};
  return doc;
}

AnalysisConfig from_json(const json& doc) {
  AnalysisConfig c;
  const json& a = doc.at("alphabet");
  c.alphabet.match.match_threshold = a.at("match_threshold").get<double>();
  c.alphabet.match.gof_alpha = a.at("gof_alpha").get<double>();
  c.alphabet.glyph_dir = a.at("glyph_dir").get<std::string>();

  const json& v = doc.at("voronoi");
  c.voronoi.extract.sauvola.window = v.at("sauvola_window").get<int>();
  c.voronoi.extract.sauvola.k = v.at("sauvola_k").get<double>();
  c.voronoi.extract.sauvola.r = v.at("sauvola_r").get<double>();
  c.voronoi.extract.min_region_area = v.at("min_region_area").get<double>();
  c.voronoi.class_tolerance = v.at("class_tolerance").get<int>();
  c.voronoi.rho_threshold = v.at("rho_threshold").get<double>();
  c.voronoi.class_gof_alpha = v.at("class_gof_alpha").get<double>();

  const json& f = doc.at("flag");
  c.flag.pattern_file = f.at("pattern_file").get<std::string>();
  c.flag.fg_boundary = f.at("fg_boundary").get<double>();
  c.flag.rmae_bound = f.at("rmae_bound").get<double>();
  c.flag.moran_alpha = f.at("moran_alpha").get<double>();
  c.flag.tile_pass_fraction = f.at("tile_pass_fraction").get<double>();
  c.flag.gof_bins = f.at("gof_bins").get<int>();
  c.flag.gof_alpha = f.at("gof_alpha").get<double>();

  const json& e = doc.at("compare");
  c.compare.features.tissues.tissues.clear();
  for (const auto& t : e.at("tissues")) {
    c.compare.features.tissues.tissues.push_back(
        {t.at("name").get<std::string>(), t.at("lo").get<int>(), t.at("hi").get<int>()});
  }
  c.compare.features.glcm.levels = e.at("glcm_levels").get<int>();
  c.compare.features.glcm.offsets.clear();
  for (const auto& o : e.at("glcm_offsets")) {
    if (!o.is_array() || o.size() != 2) throw ConfigError("glcm_offsets entries must be [dy, dx]");
    c.compare.features.glcm.offsets.emplace_back(o[0].get<int>(), o[1].get<int>());
  }
  c.compare.pairs = e.at("pairs").get<std::size_t>();
  c.compare.components = e.at("components").get<std::size_t>();
  c.compare.k_neighbors = e.at("k_neighbors").get<std::size_t>();
  c.compare.seed = e.at("seed").get<std::uint64_t>();
  return c;
}

// Every key of `given` must exist in `reference` with a compatible type.
void check_keys(const json& given, const json& reference, const std::string& path) {
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!reference.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    const json& ref = reference.at(it.key());
    const bool compatible = (ref.is_number() && it->is_number()) || (ref.is_string() && it->is_string()) ||
                            (ref.is_array() && it->is_array()) || (ref.is_object() && it->is_object()) ||
                            (ref.is_boolean() && it->is_boolean());
    if (!compatible) throw ConfigError("config key '" + key + "' has the wrong type");
    if (ref.is_object()) check_keys(*it, ref, key);
  }
}

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

void AnalysisConfig::validate() const {
  if (!in_open_unit(alphabet.match.match_threshold)) throw ConfigError("alphabet.match_threshold must be in (0,1)");
  if (!in_open_unit(alphabet.match.gof_alpha)) throw ConfigError("alphabet.gof_alpha must be in (0,1)");
  if (voronoi.extract.sauvola.window < 3 || voronoi.extract.sauvola.window % 2 == 0) {
    throw ConfigError("voronoi.sauvola_window must be odd and >= 3");
  }
  if (!(voronoi.extract.sauvola.r > 0.0)) throw ConfigError("voronoi.sauvola_r must be positive");
  if (voronoi.extract.min_region_area < 0.0) throw ConfigError("voronoi.min_region_area must be >= 0");
  if (voronoi.class_tolerance < 0 || voronoi.class_tolerance >= 8) {
    throw ConfigError("voronoi.class_tolerance must be in [0, 7]");
  }
  if (voronoi.rho_threshold < -1.0 || voronoi.rho_threshold > 1.0) {
    throw ConfigError("voronoi.rho_threshold must be in [-1, 1]");
  }
  if (!in_open_unit(voronoi.class_gof_alpha)) throw ConfigError("voronoi.class_gof_alpha must be in (0,1)");
  if (flag.rmae_bound < 0.0 || flag.rmae_bound > 1.0) throw ConfigError("flag.rmae_bound must be in [0,1]");
  if (!in_open_unit(flag.moran_alpha)) throw ConfigError("flag.moran_alpha must be in (0,1)");
  if (flag.tile_pass_fraction < 0.0 || flag.tile_pass_fraction > 1.0) {
    throw ConfigError("flag.tile_pass_fraction must be in [0,1]");
  }
  if (flag.gof_bins < 2) throw ConfigError("flag.gof_bins must be >= 2");
  if (!in_open_unit(flag.gof_alpha)) throw ConfigError("flag.gof_alpha must be in (0,1)");
  compare.features.tissues.validate();
  if (compare.features.glcm.levels < 2 || compare.features.glcm.levels > 256) {
    throw ConfigError("compare.glcm_levels must be in [2, 256]");
  }
  if (compare.features.glcm.offsets.empty()) throw ConfigError("compare.glcm_offsets must not be empty");
  if (compare.pairs < 100) throw ConfigError("compare.pairs must be >= 100");
  if (compare.components < 1) throw ConfigError("compare.components must be >= 1");
  if (compare.k_neighbors < 1) throw ConfigError("compare.k_neighbors must be >= 1");
}

AnalysisConfig parse_config(std::string_view text, const std::string& origin) {
  json given;
  try {
    given = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": malformed config: " + e.what());
  }
  if (!given.is_object()) throw ConfigError(origin + ": config must be a JSON object");
  if (!given.contains("schema_version") || !given["schema_version"].is_number_integer() ||
      given["schema_version"].get<int>() != kConfigSchemaVersion) {
    throw ConfigError(origin + ": config needs schema_version " + std::to_string(kConfigSchemaVersion));
  }
  json merged = to_json(AnalysisConfig{});
  try {
    check_keys(given, merged, "");
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  merged.merge_patch(given);
  AnalysisConfig c;
  try {
    c = from_json(merged);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  c.validate();
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string config_to_json(const AnalysisConfig& config) { return to_json(config).dump(); }

}  // namespace scmkit
