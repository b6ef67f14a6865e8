#pragma once

#include <cstddef>

#include "scmkit/stats/pca.hpp"

namespace scmkit::stats {

inline constexpr std::size_t kDefaultNeighbors = 5;

struct CoverageDensity {
  double coverage = 0.0;
  double density = 0.0;
};

/// k-NN manifold coverage and density of `fake` relative to `real`.
///
/// Each real point owns a ball whose radius is the distance to its k-th nearest
/// other real point. Coverage is the fraction of balls holding at least one fake
/// point; density is the mean number of balls holding each fake point, divided
/// by k. Membership is strict (distance < radius). Throws std::invalid_argument
/// if real has <= k points, fake is empty, or dimensions disagree.
CoverageDensity coverage_density(const RowMatrix& real, const RowMatrix& fake,
                                 std::size_t k = kDefaultNeighbors);

}  // namespace scmkit::stats
