#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scmkit/manifest.hpp"

namespace scmkit {

/// One constraint check on one image. A NaN statistic marks an undefined value
/// (e.g. rank correlation of a constant vector) and serializes as null.
struct CheckResult {
  double statistic = 0.0;
  bool pass = false;

  bool operator==(const CheckResult& o) const;
};

struct ImageResult {
  std::string file;
  std::map<std::string, CheckResult> checks;
  /// Auxiliary per-image measurements (counts, projections) used by plots.
  std::map<std::string, double> values;

  bool operator==(const ImageResult&) const = default;
};

/// Per-image and ensemble-level results of one model's analyzer chain.
struct ContextReport {
  ModelId model = ModelId::kExternal;
  std::string run_config_json = "{}";
  std::vector<ImageResult> images;
  /// Aggregates; always contains "pass_rate.<check>" for every check name.
  std::map<std::string, double> aggregates;
  std::vector<std::string> notes;

  /// Adds "pass_rate.<check>" and "evaluated.<check>" for every check seen.
  void compute_pass_rates();
  /// Throws AnalysisError if a check lacks its aggregate or a rate leaves [0,1].
  void validate() const;

  bool operator==(const ContextReport&) const = default;
};

std::string serialize_report(const ContextReport& report);
ContextReport parse_report(std::string_view text, const std::string& origin = "<report>");

}  // namespace scmkit
