#pragma once

// Straightforward reference implementations, written independently of the
// library code they check: dense weight matrices, O(n^2) ranks, CDFs
// evaluated at every sample point, Boost.Math distributions.

#include <cstddef>
#include <span>
#include <vector>

namespace scmkit::oracle {

double chi2_statistic(std::span<const double> observed, std::span<const double> expected);
double chi2_critical(double alpha, double dof);
double chi2_cdf(double x, double dof);
double normal_quantile(double p);
double regularized_beta(double x, double a, double b);
double regularized_gamma_p(double a, double x);

/// NaN when either input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

double ks(std::span<const double> a, std::span<const double> b);

struct Moran {
  double i = 0.0;
  double expected = 0.0;
  double z = 0.0;
  bool pass = false;
};

/// Dense n x n binary weights; randomization variance (normality variance for
/// n < 4).
Moran morans_i(std::span<const double> field, int width, int height, bool queen, double alpha);

struct CoverageDensity {
  double coverage = 0.0;
  double density = 0.0;
};

CoverageDensity coverage_density(const std::vector<std::vector<double>>& real,
                                 const std::vector<std::vector<double>>& fake, std::size_t k);

double cosine(std::span<const double> a, std::span<const double> b);

/// |a - b| <= rel * max(|a|, |b|), or both within 1e-12 of zero.
bool close(double a, double b, double rel = 1e-9);

}  // namespace scmkit::oracle
