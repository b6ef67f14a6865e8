#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "scmkit/alphabet.hpp"
#include "scmkit/ensemble_eval.hpp"
#include "scmkit/voronoi.hpp"

namespace scmkit {

inline constexpr int kConfigSchemaVersion = 1;

struct AlphabetAnalysisConfig {
  alphabet::AlphabetConfig match;
  std::string glyph_dir;  ///< empty = built-in templates
};

struct VoronoiAnalysisConfig {
  voronoi::ExtractParams extract;
  int class_tolerance = 1;
  double rho_threshold = 0.9;
  double class_gof_alpha = 0.05;
};

struct FlagAnalysisConfig {
  std::string pattern_file;  ///< empty = shipped patterns
  double fg_boundary = 148.0;
  double rmae_bound = 1.0 / 256.0;
  double moran_alpha = 0.05;
  double tile_pass_fraction = 0.95;
  int gof_bins = 16;
  double gof_alpha = 0.05;
};

/// Every analyzer threshold in one place. Reports embed the resolved values.
struct AnalysisConfig {
  AlphabetAnalysisConfig alphabet;
  VoronoiAnalysisConfig voronoi;
  FlagAnalysisConfig flag;
  eval::CompareOptions compare;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Overrides defaults with the keys present in `text`. Unknown keys, a wrong
/// schema_version or type mismatches throw ConfigError.
AnalysisConfig parse_config(std::string_view text, const std::string& origin = "<config>");
AnalysisConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every key, including schema_version.
std::string config_to_json(const AnalysisConfig& config);

}  // namespace scmkit
