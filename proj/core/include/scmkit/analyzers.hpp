#pragma once

#include <optional>
#include <string>

#include "scmkit/config.hpp"
#include "scmkit/flag.hpp"
#include "scmkit/generation.hpp"
#include "scmkit/glyphs.hpp"
#include "scmkit/manifest.hpp"
#include "scmkit/report.hpp"

namespace scmkit {

/// Checks: recognized (statistic = unrecognized tiles); for fully recognized
/// images also letter_prevalence (chi-squared), letter_prevalence_exact and
/// pair_prevalence (statistic = rule violations).
ImageResult analyze_alphabet_image(const GrayImage& image, const GlyphSet& glyphs,
                                   const AlphabetAnalysisConfig& config);

/// Checks: region_class (statistic = recovered count), rank_correlation
/// (Spearman rho of area vs mean intensity) and, when `label` is known,
/// class_match.
ImageResult analyze_voronoi_image(const GrayImage& image, std::optional<int> label,
                                  const VoronoiAnalysisConfig& config);

/// Checks: pattern (statistic = RMAE), forbidden (statistic = violations),
/// texture (statistic = fraction of tiles passing Moran's I), intensity_fg and
/// intensity_bg (chi-squared), and class_match when `label` is known. The
/// label is used only for class_match, never to infer roles.
ImageResult analyze_flag_image(const GrayImage& image, std::optional<int> label, const flag::PatternSpec& patterns,
                               const FlagAnalysisConfig& config);

/// Runs one model's analyzer chain over an ensemble. A manifest generated by a
/// different SCM is rejected with ConfigError; external image directories are
/// accepted for any model.
ContextReport analyze_ensemble(const Ensemble& ensemble, ModelId model, const AnalysisConfig& config,
                               const GenerationContext& context, unsigned jobs,
                               const std::string& run_config_json);

/// Feature-based comparison of two image directories (texture, morphology,
/// skeleton and F/G families). Labels of the training ensemble enable class
/// metrics.
ContextReport compare_ensembles(const Ensemble& train, const Ensemble& gen, const AnalysisConfig& config,
                                unsigned jobs, const std::string& run_config_json);

/// Implicit-context comparison of two Voronoi ensembles: two-component PCA
/// of the seven tessellation statistics fit on `train`, KS per component.
ContextReport compare_voronoi_context(const Ensemble& train, const Ensemble& gen, const AnalysisConfig& config,
                                      unsigned jobs, const std::string& run_config_json);

}  // namespace scmkit
