#pragma once

namespace scmkit::stats {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double x, double a, double b);

double chi2_cdf(double x, double dof);
/// Smallest x with chi2_cdf(x, dof) >= p, found by bracketing + bisection.
double chi2_quantile(double p, double dof);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace scmkit::stats
