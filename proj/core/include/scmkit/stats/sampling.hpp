#pragma once

#include "scmkit/rng.hpp"

namespace scmkit::stats {

/// Gamma(shape, 1) by Marsaglia-Tsang; shapes below one use the
/// U^(1/shape) boost. Throws std::invalid_argument for shape <= 0.
double gamma_variate(RngStream& rng, double shape);

/// Beta(alpha, beta) as X / (X + Y) with X ~ Gamma(alpha), Y ~ Gamma(beta).
double beta_variate(RngStream& rng, double alpha, double beta);

}  // namespace scmkit::stats
