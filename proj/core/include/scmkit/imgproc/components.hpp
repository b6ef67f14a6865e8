#pragma once

#include "scmkit/image.hpp"

namespace scmkit::imgproc {

enum class Connectivity { kFour = 4, kEight = 8 };

/// Labels maximal connected foreground regions 1..L in raster order of their
/// first pixel; background stays 0.
LabelMap connected_components(const BinaryMask& mask, Connectivity connectivity);

}  // namespace scmkit::imgproc
