#pragma once

#include "scmkit/image.hpp"

namespace scmkit::imgproc {

/// Zhang-Suen thinning to convergence, followed by removal of the redundant
/// staircase pixels it can leave behind. The result is a one-pixel-wide,
/// 8-connected skeleton with the same (8, 4) topology as the input, and
/// skeletonize(skeletonize(m)) == skeletonize(m).
BinaryMask skeletonize(const BinaryMask& mask);

/// Foreground pixels among the 8 neighbours of (x, y).
int neighbor_count(const BinaryMask& mask, int x, int y);

}  // namespace scmkit::imgproc
