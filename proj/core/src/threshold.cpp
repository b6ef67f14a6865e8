#include "scmkit/imgproc/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace scmkit::imgproc {

BinaryMask sauvola_threshold(const GrayImage& image, const SauvolaParams& params) {
  if (params.window < 3 || params.window % 2 == 0) {
    throw std::invalid_argument("sauvola_threshold: window must be odd and >= 3");
  }
  if (params.r <= 0.0) throw std::invalid_argument("sauvola_threshold: r must be positive");
  const int w = image.width();
  const int h = image.height();
  BinaryMask out(w, h);
  if (w == 0 || h == 0) return out;

  const int half = params.window / 2;
  const int pw = w + 2 * half;
  const int ph = h + 2 * half;
  // Integral images over the replicated-border padding; exact integer sums.
  std::vector<std::int64_t> sum(static_cast<std::size_t>(pw + 1) * static_cast<std::size_t>(ph + 1), 0);
  std::vector<std::int64_t> sq(sum.size(), 0);
  const auto at = [&](std::vector<std::int64_t>& v, int x, int y) -> std::int64_t& {
    return v[static_cast<std::size_t>(y) * static_cast<std::size_t>(pw + 1) + static_cast<std::size_t>(x)];
  };
  for (int y = 0; y < ph; ++y) {
    const int sy = std::clamp(y - half, 0, h - 1);
    std::int64_t row_sum = 0;
    std::int64_t row_sq = 0;
    for (int x = 0; x < pw; ++x) {
      const int sx = std::clamp(x - half, 0, w - 1);
      const std::int64_t v = image.at(sx, sy);
      row_sum += v;
      row_sq += v * v;
      at(sum, x + 1, y + 1) = at(sum, x + 1, y) + row_sum;
      at(sq, x + 1, y + 1) = at(sq, x + 1, y) + row_sq;
    }
  }

  const std::int64_t n = static_cast<std::int64_t>(params.window) * params.window;
  const double nd = static_cast<double>(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Window [x, x + window) in padded coordinates is centred on (x, y).
      const int x0 = x;
      const int y0 = y;
      const int x1 = x + params.window;
      const int y1 = y + params.window;
      const std::int64_t s = at(sum, x1, y1) - at(sum, x0, y1) - at(sum, x1, y0) + at(sum, x0, y0);
      const std::int64_t q = at(sq, x1, y1) - at(sq, x0, y1) - at(sq, x1, y0) + at(sq, x0, y0);
      const double mean = static_cast<double>(s) / nd;
      const double var = static_cast<double>(n * q - s * s) / (nd * nd);
      const double sd = std::sqrt(std::max(0.0, var));
      const double threshold = mean * (1.0 + params.k * (sd / params.r - 1.0));
      out.set(x, y, static_cast<double>(image.at(x, y)) > threshold);
    }
  }
  return out;
}

}  // namespace scmkit::imgproc
