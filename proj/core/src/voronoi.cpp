#include "scmkit/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "scmkit/errors.hpp"
#include "scmkit/imgproc/components.hpp"
#include "scmkit/imgproc/skeleton_stats.hpp"
#include "scmkit/imgproc/thinning.hpp"
#include "scmkit/stats/hypothesis_tests.hpp"

namespace scmkit::voronoi {

namespace {

std::vector<Point> sample_seeds(RngStream& rng, int cells, const VoronoiParams& params) {
  const double min_d2 = params.min_seed_distance * params.min_seed_distance;
  for (;;) {
    std::vector<Point> seeds;
    seeds.reserve(static_cast<std::size_t>(cells));
    int retries = 0;
    while (static_cast<int>(seeds.size()) < cells && retries < params.max_retries) {
      const Point p{rng.uniform() * kImageSize, rng.uniform() * kImageSize};
      const bool clear = std::all_of(seeds.begin(), seeds.end(), [&](const Point& q) {
        const double dx = p.x - q.x;
        const double dy = p.y - q.y;
        return dx * dx + dy * dy >= min_d2;
      });
      if (clear) {
        seeds.push_back(p);
      } else {
        ++retries;
      }
    }
    if (static_cast<int>(seeds.size()) == cells) return seeds;
  }
}

// Nearest seed per pixel centre; ties go to the lower seed index.
void assign_owners(const std::vector<Point>& seeds, std::vector<int>& owner) {
  const int cells = static_cast<int>(seeds.size());
  for (int y = 0; y < kImageSize; ++y) {
    const double py = y + 0.5;
    for (int x = 0; x < kImageSize; ++x) {
      const double px = x + 0.5;
      int best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int s = 0; s < cells; ++s) {
        const double dx = px - seeds[static_cast<std::size_t>(s)].x;
        const double dy = py - seeds[static_cast<std::size_t>(s)].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
          best_d2 = d2;
          best = s;
        }
      }
      owner[static_cast<std::size_t>(y) * kImageSize + static_cast<std::size_t>(x)] = best;
    }
  }
}

// Population mean and standard deviation; zeros for an empty sample.
std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

// Thinning retracts line ends, so edges that meet the image border would pull
// away from it and let neighbouring regions leak into each other. Thinning
// inside a one-pixel edge frame keeps them anchored; the frame is cropped off.
BinaryMask thin_edges(const BinaryMask& edges) {
  const int w = edges.width();
  const int h = edges.height();
  BinaryMask framed(w + 2, h + 2, true);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) framed.set(x + 1, y + 1, edges.get(x, y));
  }
  const BinaryMask thin = imgproc::skeletonize(framed);
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.set(x, y, thin.get(x + 1, y + 1));
  }
  return out;
}

}  // namespace

const std::array<int, kIntensityCount>& intensity_levels() {
  static const std::array<int, kIntensityCount> levels = [] {
    std::array<int, kIntensityCount> out{};
    for (int i = 0; i < kIntensityCount; ++i) {
      out[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(1.0 + i * 253.0 / 127.0));
    }
    return out;
  }();
  return levels;
}

bool is_valid_class(int c) { return std::find(kClasses.begin(), kClasses.end(), c) != kClasses.end(); }

VoronoiSample generate_voronoi(RngStream& rng, int class_count, const VoronoiParams& params) {
  if (!is_valid_class(class_count)) {
    throw std::invalid_argument("voronoi class must be one of 16, 32, 48, 64; got " +
                                std::to_string(class_count));
  }
  return generate_voronoi_cells(rng, class_count, params);
}

VoronoiSample generate_voronoi_cells(RngStream& rng, int cells, const VoronoiParams& params) {
  if (cells < 1 || cells > kIntensityCount) {
    throw std::invalid_argument("voronoi cell count must be in [1, 128]");
  }
  std::vector<Point> seeds;
  std::vector<int> owner(static_cast<std::size_t>(kImageSize) * kImageSize);
  std::vector<double> areas;
  for (int attempt = 0;; ++attempt) {
    seeds = sample_seeds(rng, cells, params);
    assign_owners(seeds, owner);
    areas.assign(static_cast<std::size_t>(cells), 0.0);
    for (int o : owner) areas[static_cast<std::size_t>(o)] += 1.0;
    // Equal areas would make the area ranking ambiguous; redraw. Past the
    // attempt budget, ties fall back to seed-index order.
    std::vector<double> sorted = areas;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
    if (attempt + 1 >= params.max_tie_redraws) break;
  }

  VoronoiTruth truth;
  truth.region_count = cells;
  truth.seeds = seeds;
  truth.areas = areas;

  std::vector<int> pool(kIntensityCount);
  std::iota(pool.begin(), pool.end(), 0);
  rng.shuffle(std::span<int>(pool));
  std::vector<int> chosen(pool.begin(), pool.begin() + cells);
  std::sort(chosen.begin(), chosen.end());

  std::vector<int> by_area(static_cast<std::size_t>(cells));
  std::iota(by_area.begin(), by_area.end(), 0);
  std::stable_sort(by_area.begin(), by_area.end(), [&](int a, int b) {
    return truth.areas[static_cast<std::size_t>(a)] < truth.areas[static_cast<std::size_t>(b)];
  });
  truth.intensities.assign(static_cast<std::size_t>(cells), 0.0);
  for (int rank = 0; rank < cells; ++rank) {
    truth.intensities[static_cast<std::size_t>(by_area[static_cast<std::size_t>(rank)])] =
        intensity_levels()[static_cast<std::size_t>(chosen[static_cast<std::size_t>(rank)])];
  }

  GrayImage image(kImageSize, kImageSize);
  const auto own = [&](int x, int y) { return owner[static_cast<std::size_t>(y) * kImageSize + static_cast<std::size_t>(x)]; };
  for (int y = 0; y < kImageSize; ++y) {
    for (int x = 0; x < kImageSize; ++x) {
      const int o = own(x, y);
      const bool edge = (x > 0 && own(x - 1, y) != o) || (x + 1 < kImageSize && own(x + 1, y) != o) ||
                        (y > 0 && own(x, y - 1) != o) || (y + 1 < kImageSize && own(x, y + 1) != o);
      image.at(x, y) = edge ? 0 : static_cast<std::uint8_t>(truth.intensities[static_cast<std::size_t>(o)]);
    }
  }
  return {std::move(image), std::move(truth)};
}

Regions extract_regions(const GrayImage& image, const ExtractParams& params) {
  const BinaryMask interior = imgproc::sauvola_threshold(image, params.sauvola);
  Regions out;
  out.edge_skeleton = thin_edges(interior.inverted());
  const LabelMap raw =
      imgproc::connected_components(out.edge_skeleton.inverted(), imgproc::Connectivity::kFour);
  const auto raw_areas = raw.areas();

  std::vector<int> relabel(raw_areas.size(), 0);
  int n = 0;
  for (std::size_t l = 1; l < raw_areas.size(); ++l) {
    if (static_cast<double>(raw_areas[l]) >= params.min_region_area) relabel[l] = ++n;
  }
  if (n == 0) throw AnalysisError("no regions found");
  std::vector<int> labels(raw.labels().begin(), raw.labels().end());
  for (int& l : labels) l = relabel[static_cast<std::size_t>(l)];
  out.labels = LabelMap(raw.width(), raw.height(), std::move(labels), n);

  out.areas.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sum_fg(static_cast<std::size_t>(n), 0.0), cnt_fg(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sum_all(static_cast<std::size_t>(n), 0.0), pixel_count(static_cast<std::size_t>(n), 0.0);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const int l = out.labels.at(x, y);
      if (l == 0) continue;
      const auto i = static_cast<std::size_t>(l - 1);
      out.areas[i] += 1.0;
      pixel_count[i] += 1.0;
      sum_all[i] += image.at(x, y);
      if (interior.get(x, y)) {
        sum_fg[i] += image.at(x, y);
        cnt_fg[i] += 1.0;
      }
    }
  }
  // Skeleton pixels are split evenly among the regions they border, so areas
  // estimate full cell sizes rather than cell-minus-edge.
  std::vector<int> adj;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (out.labels.at(x, y) != 0) continue;
      adj.clear();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= image.width() || ny >= image.height()) continue;
          const int l = out.labels.at(nx, ny);
          if (l != 0 && std::find(adj.begin(), adj.end(), l) == adj.end()) adj.push_back(l);
        }
      }
      for (int l : adj) out.areas[static_cast<std::size_t>(l - 1)] += 1.0 / static_cast<double>(adj.size());
    }
  }
  out.mean_intensity.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < out.mean_intensity.size(); ++i) {
    // A region Sauvola fully rejected still gets a mean over all its pixels.
    out.mean_intensity[i] = cnt_fg[i] > 0 ? sum_fg[i] / cnt_fg[i] : sum_all[i] / pixel_count[i];
  }
  return out;
}

RegionClass classify_region_count(int count, int tolerance) {
  RegionClass out;
  out.count = count;
  int matches = 0;
  for (int c : kClasses) {
    if (std::abs(count - c) <= tolerance) {
      out.label = c;
      ++matches;
    }
  }
  if (matches != 1) out.label.reset();
  return out;
}

std::optional<double> check_rank_correlation(std::span<const double> areas,
                                             std::span<const double> intensities) {
  if (areas.size() < 2) throw std::invalid_argument("rank correlation needs at least two regions");
  return stats::spearman_rho(areas, intensities);
}

std::vector<double> ImplicitContextStats::values() const {
  return {region_count, junction_count, junction_density, edge_length_mean,
          edge_length_std, area_mean, area_std};
}

const std::vector<const char*>& ImplicitContextStats::names() {
  static const std::vector<const char*> n = {"region_count",     "junction_count",  "junction_density",
                                             "edge_length_mean", "edge_length_std", "area_mean",
                                             "area_std"};
  return n;
}

ImplicitContextStats implicit_context(const Regions& regions) {
  ImplicitContextStats s;
  s.region_count = static_cast<double>(regions.labels.count());
  const auto graph = imgproc::analyze_skeleton(regions.edge_skeleton);
  s.junction_count = graph.junction_count;
  s.junction_density = graph.skeleton_pixels > 0
                           ? graph.junction_count / static_cast<double>(graph.skeleton_pixels)
                           : 0.0;
  std::tie(s.edge_length_mean, s.edge_length_std) = mean_std(graph.branch_lengths);
  std::tie(s.area_mean, s.area_std) = mean_std(regions.areas);
  return s;
}

ImplicitContextStats implicit_context(const GrayImage& image, const ExtractParams& params) {
  return implicit_context(extract_regions(image, params));
}

ImplicitPca implicit_context_pca(std::span<const ImplicitContextStats> train,
                                 std::span<const ImplicitContextStats> test) {
  if (train.size() < 50) throw std::invalid_argument("implicit-context PCA needs at least 50 training images");
  if (test.empty()) throw std::invalid_argument("implicit-context PCA needs a nonempty test set");
  stats::RowMatrix tr, te;
  for (const auto& s : train) tr.push_back(s.values());
  for (const auto& s : test) te.push_back(s.values());

  ImplicitPca out;
  out.model = stats::pca_fit(tr, 2);
  out.train_projection = stats::pca_project_all(out.model, tr);
  out.test_projection = stats::pca_project_all(out.model, te);
  out.ks = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  for (std::size_t c = 0; c < out.model.k(); ++c) {
    std::vector<double> a, b;
    for (const auto& row : out.train_projection) a.push_back(row[c]);
    for (const auto& row : out.test_projection) b.push_back(row[c]);
    out.ks[c] = stats::ks_two_sample(a, b);
  }
  return out;
}

}  // namespace scmkit::voronoi
