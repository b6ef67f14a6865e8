#include "scmkit/imgproc/glcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scmkit::imgproc {

FeatureVector glcm_features(const GrayImage& image, const GlcmParams& params) {
  if (params.levels < 2 || params.levels > 256) {
    throw std::invalid_argument("glcm_features: levels must be in [2, 256]");
  }
  if (params.offsets.empty()) throw std::invalid_argument("glcm_features: no offsets");
  const auto levels = static_cast<std::size_t>(params.levels);
  const int w = image.width();
  const int h = image.height();

  std::vector<int> q(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = static_cast<int>(image.pixels()[i]) * params.levels / 256;
  }

  double contrast = 0.0;
  double correlation = 0.0;
  double energy = 0.0;
  double homogeneity = 0.0;
  double entropy = 0.0;
  bool correlation_defined = true;
  std::vector<double> p(levels * levels);

  for (const auto& [dy, dx] : params.offsets) {
    std::fill(p.begin(), p.end(), 0.0);
    double total = 0.0;
    for (int y = 0; y < h; ++y) {
      const int y2 = y + dy;
      if (y2 < 0 || y2 >= h) continue;
      for (int x = 0; x < w; ++x) {
        const int x2 = x + dx;
        if (x2 < 0 || x2 >= w) continue;
        const auto a = static_cast<std::size_t>(q[static_cast<std::size_t>(y * w + x)]);
        const auto b = static_cast<std::size_t>(q[static_cast<std::size_t>(y2 * w + x2)]);
        p[a * levels + b] += 1.0;
        p[b * levels + a] += 1.0;
        total += 2.0;
      }
    }
    if (total == 0.0) throw std::invalid_argument("glcm_features: offset larger than image");
    for (auto& v : p) v /= total;

    double mu = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
      for (std::size_t j = 0; j < levels; ++j) mu += static_cast<double>(i) * p[i * levels + j];
    }
    // Symmetric matrix: both marginals share mean and variance.
    double var = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
      for (std::size_t j = 0; j < levels; ++j) {
        const double di = static_cast<double>(i) - mu;
        var += di * di * p[i * levels + j];
      }
    }
    double cov = 0.0;
    for (std::size_t i = 0; i < levels; ++i) {
      for (std::size_t j = 0; j < levels; ++j) {
        const double pij = p[i * levels + j];
        if (pij == 0.0) continue;
        const double diff = static_cast<double>(i) - static_cast<double>(j);
        contrast += diff * diff * pij;
        energy += pij * pij;
        homogeneity += pij / (1.0 + diff * diff);
        entropy -= pij * std::log(pij);
        cov += (static_cast<double>(i) - mu) * (static_cast<double>(j) - mu) * pij;
      }
    }
    if (var > 1e-15) {
      correlation += cov / var;
    } else {
      correlation_defined = false;
    }
  }

  const double n = static_cast<double>(params.offsets.size());
  FeatureVector out;
  out.add("contrast", contrast / n);
  out.add("correlation",
          correlation_defined ? correlation / n : std::numeric_limits<double>::quiet_NaN());
  out.add("energy", energy / n);
  out.add("homogeneity", homogeneity / n);
  out.add("entropy", entropy / n);
  return out;
}

}  // namespace scmkit::imgproc
