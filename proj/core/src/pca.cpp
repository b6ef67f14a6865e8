#include "scmkit/stats/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace scmkit::stats {

PcaModel pca_fit(const RowMatrix& data, std::size_t k) {
  if (data.size() < 2) throw std::invalid_argument("pca_fit: need at least two observations");
  const std::size_t d = data.front().size();
  for (const auto& row : data) {
    if (row.size() != d) throw std::invalid_argument("pca_fit: ragged data matrix");
  }
  if (k == 0 || k > d) throw std::invalid_argument("pca_fit: k must be in [1, d]");

  const auto n = static_cast<double>(data.size());
  PcaModel model;
  model.input_dim = d;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& row : data) mean += row[j];
    mean /= n;
    double ss = 0.0;
    for (const auto& row : data) ss += (row[j] - mean) * (row[j] - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    // Relative cutoff so that a column that is constant up to rounding counts as constant.
    if (!(sd > 1e-12 * std::max(1.0, std::fabs(mean)))) {
      model.dropped.push_back(j);
      continue;
    }
    model.kept.push_back(j);
    model.mean.push_back(mean);
    model.scale.push_back(sd);
  }
  const std::size_t dk = model.kept.size();
  if (dk == 0) throw std::invalid_argument("pca_fit: every feature column is constant");
  k = std::min(k, dk);

  Eigen::MatrixXd z(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t c = 0; c < dk; ++c) {
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          (data[i][model.kept[c]] - model.mean[c]) / model.scale[c];
    }
  }
  const Eigen::MatrixXd cov = (z.transpose() * z) / (n - 1.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd values = eig.eigenvalues();
  const Eigen::MatrixXd vectors = eig.eigenvectors();
  model.total_variance = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) model.total_variance += std::max(0.0, values(i));
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index col = values.size() - 1 - static_cast<Eigen::Index>(c);
    std::vector<double> comp(dk);
    std::size_t argmax = 0;
    for (std::size_t r = 0; r < dk; ++r) {
      comp[r] = vectors(static_cast<Eigen::Index>(r), col);
      if (std::fabs(comp[r]) > std::fabs(comp[argmax]) + 1e-12) argmax = r;
    }
    if (comp[argmax] < 0.0) {
      for (auto& v : comp) v = -v;
    }
    model.components.push_back(std::move(comp));
    model.explained_variance.push_back(std::max(0.0, values(col)));
  }
  return model;
}

std::vector<double> pca_project(const PcaModel& model, std::span<const double> vector) {
  if (vector.size() != model.input_dim) {
    throw std::invalid_argument("pca_project: vector length " + std::to_string(vector.size()) +
                                " does not match model dimension " +
                                std::to_string(model.input_dim));
  }
  std::vector<double> z(model.kept.size());
  for (std::size_t c = 0; c < model.kept.size(); ++c) {
    z[c] = (vector[model.kept[c]] - model.mean[c]) / model.scale[c];
  }
  std::vector<double> out(model.k(), 0.0);
  for (std::size_t i = 0; i < model.k(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) acc += model.components[i][c] * z[c];
    out[i] = acc;
  }
  return out;
}

RowMatrix pca_project_all(const PcaModel& model, const RowMatrix& data) {
  RowMatrix out;
  out.reserve(data.size());
  for (const auto& row : data) out.push_back(pca_project(model, row));
  return out;
}

}  // namespace scmkit::stats
