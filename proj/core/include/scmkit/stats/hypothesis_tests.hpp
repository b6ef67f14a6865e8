#pragma once

#include <optional>
#include <span>

namespace scmkit::stats {

/// Pearson chi-squared goodness of fit. pass <=> statistic <= critical_value.
struct GofResult {
  double statistic = 0.0;
  int dof = 1;
  double critical_value = 0.0;
  bool pass = false;
};

/// Pearson statistic sum (O-E)^2/E against the (1 - alpha) chi-squared
/// quantile with categories - 1 degrees of freedom.
///
/// Throws std::invalid_argument when the category counts differ, fewer than two
/// categories are given, any expected count is not positive, or alpha is not in
/// (0, 1).
GofResult chi2_gof(std::span<const double> observed, std::span<const double> expected,
                   double alpha);

/// Spearman rank correlation with average ranks for ties. Returns nullopt when
/// either input is constant (rank correlation undefined).
std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

enum class Adjacency { kRook, kQueen };

struct MoransResult {
  double i = 0.0;
  double expected = 0.0;
  double z_score = 0.0;
  bool pass = false;
};

/// Global Moran's I on a width x height lattice with binary contiguity weights.
///
/// The z-score uses the randomization-null variance (normality variance when
/// fewer than four sites make the randomization moments undefined); pass means
/// |z| does not exceed the two-sided (1 - alpha) normal bound. Throws
/// std::invalid_argument for a constant field or fewer than two sites.
MoransResult morans_i(std::span<const double> field, int width, int height,
                      Adjacency adjacency = Adjacency::kRook, double alpha = 0.05);

/// a.b / (|a| |b|); throws std::invalid_argument on a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace scmkit::stats
