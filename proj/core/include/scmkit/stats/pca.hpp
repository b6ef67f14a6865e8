#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scmkit::stats {

/// Row-per-observation data matrix.
using RowMatrix = std::vector<std::vector<double>>;

/// Principal components of z-scored features.
///
/// Columns with zero variance are dropped before the decomposition and listed in
/// `dropped`; `components` and the decomposition live in the space of the kept
/// columns. Each component is sign-normalized so that its largest-magnitude
/// entry is positive, which makes fits reproducible bit-for-bit.
struct PcaModel {
  std::size_t input_dim = 0;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> dropped;
  std::vector<double> mean;   ///< per kept column
  std::vector<double> scale;  ///< sample standard deviation per kept column
  RowMatrix components;       ///< k rows, each of length kept.size(), orthonormal
  std::vector<double> explained_variance;  ///< non-increasing, non-negative
  double total_variance = 0.0;

  std::size_t k() const { return components.size(); }
  double explained_ratio(std::size_t i) const {
    return total_variance > 0.0 ? explained_variance[i] / total_variance : 0.0;
  }
};

/// Throws std::invalid_argument if k > d, k == 0, rows are ragged, or fewer
/// than two rows are given. When dropped columns leave fewer than k usable
/// features, k is reduced to the number kept.
PcaModel pca_fit(const RowMatrix& data, std::size_t k);

/// Standardize `vector` with the model's mean/scale and project onto its
/// components. Throws std::invalid_argument on length mismatch.
std::vector<double> pca_project(const PcaModel& model, std::span<const double> vector);

RowMatrix pca_project_all(const PcaModel& model, const RowMatrix& data);

}  // namespace scmkit::stats
