#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace scmkit::oracle {

double chi2_statistic(std::span<const double> observed, std::span<const double> expected) {
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

double chi2_critical(double alpha, double dof) {
  return boost::math::quantile(boost::math::chi_squared(dof), 1.0 - alpha);
}

double chi2_cdf(double x, double dof) { return boost::math::cdf(boost::math::chi_squared(dof), x); }

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

double regularized_beta(double x, double a, double b) { return boost::math::ibeta(a, b, x); }

double regularized_gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

namespace {

std::vector<double> naive_ranks(std::span<const double> v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0;
    double equal = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) less += 1.0;
      if (j != i && v[j] == v[i]) equal += 1.0;
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = naive_ranks(x);
  const auto ry = naive_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

double ks(std::span<const double> a, std::span<const double> b) {
  const auto cdf = [](std::span<const double> s, double t) {
    double c = 0.0;
    for (double v : s) {
      if (v <= t) c += 1.0;
    }
    return c / static_cast<double>(s.size());
  };
  double best = 0.0;
  for (auto s : {a, b}) {
    for (double t : s) best = std::max(best, std::abs(cdf(a, t) - cdf(b, t)));
  }
  return best;
}

Moran morans_i(std::span<const double> field, int width, int height, bool queen, double alpha) {
  const std::size_t n = field.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int y2 = 0; y2 < height; ++y2) {
        for (int x2 = 0; x2 < width; ++x2) {
          const int dx = std::abs(x - x2);
          const int dy = std::abs(y - y2);
          const bool rook = dx + dy == 1;
          const bool diag = dx == 1 && dy == 1;
          if (rook || (queen && diag)) w[y * width + x][y2 * width + x2] = 1.0;
        }
      }
    }
  }
  double mean = 0.0;
  for (double v : field) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = field[i] - mean;

  double s0 = 0.0, s1 = 0.0, s2 = 0.0, num = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s0 += w[i][j];
      s1 += 0.5 * (w[i][j] + w[j][i]) * (w[i][j] + w[j][i]);
      row += w[i][j];
      col += w[j][i];
      num += w[i][j] * z[i] * z[j];
    }
    s2 += (row + col) * (row + col);
    m2 += z[i] * z[i];
    m4 += z[i] * z[i] * z[i] * z[i];
  }
  const double nd = static_cast<double>(n);
  Moran r;
  r.i = nd / s0 * num / m2;
  r.expected = -1.0 / (nd - 1.0);
  double e2 = 0.0;
  if (n >= 4) {
    const double b2 = nd * m4 / (m2 * m2);
    e2 = (nd * ((nd * nd - 3.0 * nd + 3.0) * s1 - nd * s2 + 3.0 * s0 * s0) -
          b2 * ((nd * nd - nd) * s1 - 2.0 * nd * s2 + 6.0 * s0 * s0)) /
         ((nd - 1.0) * (nd - 2.0) * (nd - 3.0) * s0 * s0);
  } else {
    e2 = (nd * nd * s1 - nd * s2 + 3.0 * s0 * s0) / ((nd * nd - 1.0) * s0 * s0);
  }
  const double var = e2 - r.expected * r.expected;
  r.z = (r.i - r.expected) / std::sqrt(var);
  r.pass = std::abs(r.z) <= normal_quantile(1.0 - alpha / 2.0);
  return r;
}

CoverageDensity coverage_density(const std::vector<std::vector<double>>& real,
                                 const std::vector<std::vector<double>>& fake, std::size_t k) {
  const auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  std::vector<double> radius(real.size());
  for (std::size_t i = 0; i < real.size(); ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < real.size(); ++j) {
      if (j != i) d.push_back(dist(real[i], real[j]));
    }
    std::sort(d.begin(), d.end());
    radius[i] = d[k - 1];
  }
  double covered = 0.0;
  double memberships = 0.0;
  for (std::size_t i = 0; i < real.size(); ++i) {
    bool any = false;
    for (const auto& f : fake) {
      if (dist(real[i], f) < radius[i]) {
        any = true;
        memberships += 1.0;
      }
    }
    if (any) covered += 1.0;
  }
  return {covered / static_cast<double>(real.size()),
          memberships / (static_cast<double>(k) * static_cast<double>(fake.size()))};
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

bool close(double a, double b, double rel) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  const double d = std::abs(a - b);
  return d <= rel * std::max(std::abs(a), std::abs(b)) || (std::abs(a) < 1e-12 && std::abs(b) < 1e-12);
}

}  // namespace scmkit::oracle
