#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scmkit/features.hpp"
#include "scmkit/image.hpp"
#include "scmkit/imgproc/glcm.hpp"
#include "scmkit/rng.hpp"
#include "scmkit/stats/neighbors.hpp"
#include "scmkit/stats/pca.hpp"

namespace scmkit::eval {

/// Inclusive intensity interval of one tissue.
struct TissueInterval {
  std::string name;
  int lo = 0;
  int hi = 255;
};

struct TissueConfig {
  std::vector<TissueInterval> tissues = {{"fat", 40, 110}, {"glandular", 150, 220}, {"ligament", 230, 255}};

  /// Throws ConfigError unless intervals lie in [0,255], are non-empty and
  /// pairwise disjoint, names are unique, and fat, glandular and ligament exist.
  void validate() const;
};

using TissueMasks = std::map<std::string, BinaryMask>;

TissueMasks segment_tissues(const GrayImage& image, const TissueConfig& config);

/// Fat pixel count over glandular pixel count. Throws AnalysisError when the
/// glandular mask is empty.
double fg_ratio(const TissueMasks& masks);

inline const std::vector<std::string>& feature_families() {
  static const std::vector<std::string> f = {"texture", "morphology", "skeleton", "fg_ratio"};
  return f;
}

/// Family of a feature name ("texture.contrast" -> "texture").
std::string family_of(const std::string& feature_name);

struct FeatureOptions {
  TissueConfig tissues;
  imgproc::GlcmParams glcm;
};

/// texture.* (GLCM of the image), morphology.* (glandular mask),
/// skeleton.* (thinned ligament mask) and fg_ratio, always in that order and
/// always with the same names. Undefined values (constant image, empty
/// glandular mask) are NaN.
FeatureVector extract_features(const GrayImage& image, const FeatureOptions& options = {});

struct PairSimilarity {
  std::vector<double> train_train;
  std::vector<double> train_gen;
  double ks = 0.0;
  std::size_t components = 0;
};

/// PCA (k components, clipped to the usable feature count) fit on `train`;
/// cosine similarity of `pairs` random train-train pairs (i != j) and `pairs`
/// random train-gen pairs in the projected space; KS between the two. Pairs
/// landing on a zero projection are redrawn. Throws std::invalid_argument for
/// pairs < 100, fewer than two train rows or an empty gen set.
PairSimilarity pair_similarity_distributions(const stats::RowMatrix& train, const stats::RowMatrix& gen,
                                             std::size_t pairs, std::size_t k, RngStream& rng);

struct ClassMetrics {
  std::vector<int> classes;                 ///< sorted by median F/G ratio
  std::vector<double> boundaries;           ///< F/G cut points between consecutive classes
  std::map<int, double> prevalence;         ///< fraction of gen assigned to each class
  std::map<int, stats::CoverageDensity> coverage;
};

/// Per-class coverage/density in the top-two PC space of `train`, and class
/// prevalence of `gen` from F/G-ratio thresholds. Each threshold is the
/// midpoint between the 0.95 quantile of the lower class and the 0.05
/// quantile of the upper class (classes ordered by median ratio). A class with
/// no assigned gen images has coverage and density 0. Throws AnalysisError for
/// fewer than four classes or a class with <= k_neighbors points.
ClassMetrics class_metrics(const stats::RowMatrix& train, const std::vector<int>& train_labels,
                           const std::vector<double>& train_fg, const stats::RowMatrix& gen,
                           const std::vector<double>& gen_fg,
                           std::size_t k_neighbors = stats::kDefaultNeighbors);

struct CompareOptions {
  FeatureOptions features;
  std::size_t pairs = 10000;
  std::size_t components = 10;
  std::size_t k_neighbors = stats::kDefaultNeighbors;
  std::uint64_t seed = 0;
};

struct LabeledFeatures {
  std::vector<FeatureVector> features;
  std::vector<std::optional<int>> labels;
};

struct Comparison {
  std::vector<std::string> feature_names;
  /// NaN when too few complete vectors remain.
  double overall_ks = 0.0;
  std::map<std::string, double> family_ks;
  std::size_t train_used = 0;
  std::size_t gen_used = 0;
  std::size_t train_excluded = 0;
  std::size_t gen_excluded = 0;
  std::optional<ClassMetrics> classes;
  /// PC1-PC2 coordinates of the complete vectors, for plotting.
  stats::RowMatrix train_pc;
  stats::RowMatrix gen_pc;
  std::vector<std::string> notes;
};

/// The full pipeline: complete vectors for the overall score, per-family
/// complete vectors for family scores (one-dimensional families fall back to
/// KS of the raw values), class metrics when train carries labels.
Comparison compare_features(const LabeledFeatures& train, const LabeledFeatures& gen,
                            const CompareOptions& options);

}  // namespace scmkit::eval
