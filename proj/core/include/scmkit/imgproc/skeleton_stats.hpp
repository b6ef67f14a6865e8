#pragma once

#include <vector>

#include "scmkit/features.hpp"
#include "scmkit/image.hpp"

namespace scmkit::imgproc {

struct SkeletonGraph {
  /// 8-connected clusters of pixels with three or more skeleton neighbours.
  int junction_count = 0;
  /// Pixel counts of the 8-connected pieces left after removing junction pixels.
  std::vector<double> branch_lengths;
  std::size_t skeleton_pixels = 0;
};

SkeletonGraph analyze_skeleton(const BinaryMask& skeleton);

/// branch_count, junction_count, junction_density (junctions per skeleton
/// pixel), branch_length_mean, branch_length_std, total_length. All zero for
/// an empty skeleton.
FeatureVector skeleton_statistics(const BinaryMask& skeleton);

}  // namespace scmkit::imgproc
