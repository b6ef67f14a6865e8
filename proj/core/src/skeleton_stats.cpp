#include "scmkit/imgproc/skeleton_stats.hpp"

#include <cmath>

#include "scmkit/imgproc/components.hpp"
#include "scmkit/imgproc/thinning.hpp"

namespace scmkit::imgproc {

SkeletonGraph analyze_skeleton(const BinaryMask& skeleton) {
  const int w = skeleton.width();
  const int h = skeleton.height();
  BinaryMask junctions(w, h);
  BinaryMask rest(w, h);
  SkeletonGraph g;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!skeleton.get(x, y)) continue;
      ++g.skeleton_pixels;
      if (neighbor_count(skeleton, x, y) >= 3) {
        junctions.set(x, y, true);
      } else {
        rest.set(x, y, true);
      }
    }
  }
  g.junction_count = connected_components(junctions, Connectivity::kEight).count();
  const LabelMap branches = connected_components(rest, Connectivity::kEight);
  const auto areas = branches.areas();
  for (std::size_t i = 1; i < areas.size(); ++i) g.branch_lengths.push_back(static_cast<double>(areas[i]));
  return g;
}

FeatureVector skeleton_statistics(const BinaryMask& skeleton) {
  const SkeletonGraph g = analyze_skeleton(skeleton);
  const double n = static_cast<double>(g.branch_lengths.size());
  double mean = 0.0;
  for (double v : g.branch_lengths) mean += v;
  mean = n > 0 ? mean / n : 0.0;
  double var = 0.0;
  for (double v : g.branch_lengths) var += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(var / n) : 0.0;

  FeatureVector out;
  out.add("branch_count", n);
  out.add("junction_count", static_cast<double>(g.junction_count));
  out.add("junction_density",
          g.skeleton_pixels > 0
              ? static_cast<double>(g.junction_count) / static_cast<double>(g.skeleton_pixels)
              : 0.0);
  out.add("branch_length_mean", mean);
  out.add("branch_length_std", sd);
  out.add("total_length", static_cast<double>(g.skeleton_pixels));
  return out;
}

}  // namespace scmkit::imgproc
