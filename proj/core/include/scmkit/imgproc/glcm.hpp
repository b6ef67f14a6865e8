#pragma once

#include <utility>
#include <vector>

#include "scmkit/features.hpp"
#include "scmkit/image.hpp"

namespace scmkit::imgproc {

struct GlcmParams {
  int levels = 32;
  /// (dy, dx) displacements.
  std::vector<std::pair<int, int>> offsets = {{0, 1}, {1, 0}};
};

/// Haralick descriptors of the symmetric, normalized grey-level co-occurrence
/// matrix, averaged over the offsets: contrast, correlation, energy (angular
/// second moment), homogeneity, entropy (natural log). Intensities are
/// quantized as v * levels / 256. Correlation is NaN when either marginal has
/// zero variance (e.g. a constant image).
FeatureVector glcm_features(const GrayImage& image, const GlcmParams& params = {});

}  // namespace scmkit::imgproc
