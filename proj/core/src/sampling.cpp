#include "scmkit/stats/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace scmkit::stats {

double gamma_variate(RngStream& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma_variate: shape must be positive");
  if (shape < 1.0) {
    const double u = rng.uniform_open();
    return gamma_variate(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_variate(RngStream& rng, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("beta_variate: shape parameters must be positive");
  }
  const double x = gamma_variate(rng, alpha);
  const double y = gamma_variate(rng, beta);
  return x / (x + y);
}

}  // namespace scmkit::stats
