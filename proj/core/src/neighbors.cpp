#include "scmkit/stats/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmkit::stats {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

CoverageDensity coverage_density(const RowMatrix& real, const RowMatrix& fake, std::size_t k) {
  if (k == 0) throw std::invalid_argument("coverage_density: k must be positive");
  if (real.size() <= k) {
    throw std::invalid_argument("coverage_density: need more than k real points");
  }
  if (fake.empty()) throw std::invalid_argument("coverage_density: fake set is empty");
  const std::size_t dim = real.front().size();
  for (const auto& p : real) {
    if (p.size() != dim) throw std::invalid_argument("coverage_density: dimension mismatch");
  }
  for (const auto& p : fake) {
    if (p.size() != dim) throw std::invalid_argument("coverage_density: dimension mismatch");
  }

  // Squared radii; comparisons stay in squared space.
  std::vector<double> radius2(real.size());
  std::vector<double> dists;
  dists.reserve(real.size());
  for (std::size_t i = 0; i < real.size(); ++i) {
    dists.clear();
    for (std::size_t j = 0; j < real.size(); ++j) {
      if (j != i) dists.push_back(squared_distance(real[i], real[j]));
    }
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1), dists.end());
    radius2[i] = dists[k - 1];
  }

  std::vector<bool> covered(real.size(), false);
  std::size_t memberships = 0;
  for (const auto& f : fake) {
    for (std::size_t i = 0; i < real.size(); ++i) {
      if (squared_distance(f, real[i]) < radius2[i]) {
        covered[i] = true;
        ++memberships;
      }
    }
  }
  CoverageDensity out;
  out.coverage = static_cast<double>(std::count(covered.begin(), covered.end(), true)) /
                 static_cast<double>(real.size());
  out.density = static_cast<double>(memberships) /
                (static_cast<double>(k) * static_cast<double>(fake.size()));
  return out;
}

}  // namespace scmkit::stats
