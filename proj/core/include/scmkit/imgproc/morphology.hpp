#pragma once

#include <vector>

#include "scmkit/features.hpp"
#include "scmkit/image.hpp"

namespace scmkit::imgproc {

struct RegionProps {
  double area = 0.0;
  /// Boundary length: pixel edges shared between the region and background.
  double perimeter = 0.0;
  /// sqrt(1 - l2 / l1) of the second-moment ellipse; 0 for a single pixel.
  double eccentricity = 0.0;
  /// area / pixels whose centres lie inside the convex hull of the region's pixel centres.
  double solidity = 1.0;
};

/// Properties of each 8-connected component, in label order.
std::vector<RegionProps> region_properties(const BinaryMask& mask);

/// Component count plus mean and standard deviation of each property.
/// Throws std::invalid_argument on an empty mask.
FeatureVector morphology_features(const BinaryMask& mask);

}  // namespace scmkit::imgproc
