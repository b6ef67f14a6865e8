#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "scmkit/image.hpp"
#include "scmkit/imgproc/threshold.hpp"
#include "scmkit/rng.hpp"
#include "scmkit/stats/pca.hpp"

namespace scmkit::voronoi {

inline constexpr std::array<int, 4> kClasses = {16, 32, 48, 64};
inline constexpr int kIntensityCount = 128;

/// v_i = round(1 + i * 253 / 127): 128 distinct levels spanning [1, 254].
const std::array<int, kIntensityCount>& intensity_levels();

bool is_valid_class(int c);

struct VoronoiParams {
  double min_seed_distance = 8.0;
  int max_retries = 10000;
  /// Tessellations with two equal cell areas are redrawn up to this many times.
  int max_tie_redraws = 1000;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct VoronoiTruth {
  int region_count = 0;
  std::vector<Point> seeds;
  /// Full cell pixel counts (edge pixels included), by seed index.
  std::vector<double> areas;
  /// Assigned intensity per seed index.
  std::vector<double> intensities;
};

struct VoronoiSample {
  GrayImage image;
  VoronoiTruth truth;
};

/// Random tessellation with `class_count` cells drawn from the stream.
/// Throws std::invalid_argument for a class outside {16, 32, 48, 64}.
VoronoiSample generate_voronoi(RngStream& rng, int class_count, const VoronoiParams& params = {});

/// Same construction for any cell count in [1, 128]; used by the corruption
/// harness to produce off-class images.
VoronoiSample generate_voronoi_cells(RngStream& rng, int cells, const VoronoiParams& params = {});

struct ExtractParams {
  /// A 15-px window erodes dark cells that border bright ones, merging them
  /// into the edge network; 3 px sees only a cell and its own edge.
  imgproc::SauvolaParams sauvola{3, 0.2, 128.0};
  /// Enclosed pockets smaller than this are treated as edge, not as regions.
  double min_region_area = 16.0;
};

struct Regions {
  LabelMap labels;
  std::vector<double> areas;           ///< by label - 1
  std::vector<double> mean_intensity;  ///< by label - 1
  BinaryMask edge_skeleton;
};

/// Sauvola, inversion, thinning of the dark edge network, then 4-connected
/// components of everything off the skeleton. Mean intensities use only the
/// pixels Sauvola kept as foreground. Throws AnalysisError if no region is found.
Regions extract_regions(const GrayImage& image, const ExtractParams& params = {});

struct RegionClass {
  std::optional<int> label;  ///< empty = off-class
  int count = 0;
};

/// Nearest class within `tolerance`, or off-class carrying the raw count.
RegionClass classify_region_count(int count, int tolerance = 1);

/// Spearman rho of areas vs intensities; nullopt when undefined (constant
/// input). Throws std::invalid_argument for fewer than two regions.
std::optional<double> check_rank_correlation(std::span<const double> areas,
                                             std::span<const double> intensities);

struct ImplicitContextStats {
  double region_count = 0.0;
  double junction_count = 0.0;
  double junction_density = 0.0;
  double edge_length_mean = 0.0;
  double edge_length_std = 0.0;
  double area_mean = 0.0;
  double area_std = 0.0;

  std::vector<double> values() const;
  static const std::vector<const char*>& names();
};

ImplicitContextStats implicit_context(const Regions& regions);
ImplicitContextStats implicit_context(const GrayImage& image, const ExtractParams& params = {});

struct ImplicitPca {
  stats::PcaModel model;
  stats::RowMatrix train_projection;
  stats::RowMatrix test_projection;
  std::array<double, 2> ks{};
};

/// Two-component PCA fit on `train`; both sets projected, KS per coordinate.
/// Throws std::invalid_argument if train has fewer than 50 entries or test is empty.
ImplicitPca implicit_context_pca(std::span<const ImplicitContextStats> train,
                                 std::span<const ImplicitContextStats> test);

}  // namespace scmkit::voronoi
