#pragma once

#include "scmkit/image.hpp"

namespace scmkit::imgproc {

struct SauvolaParams {
  int window = 15;   ///< odd, >= 3
  double k = 0.2;
  double r = 128.0;  ///< dynamic range of the standard deviation
};

/// Local adaptive binarization. A pixel is foreground when its intensity
/// exceeds m * (1 + k * (s / r - 1)), with m and s the mean and population
/// standard deviation over the window centred on it; borders are replicated.
/// Throws std::invalid_argument for an even or too-small window.
BinaryMask sauvola_threshold(const GrayImage& image, const SauvolaParams& params = {});

}  // namespace scmkit::imgproc
