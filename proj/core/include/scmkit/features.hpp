#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scmkit {

/// Ordered named features. NaN marks an undefined value.
class FeatureVector {
 public:
  void add(std::string name, double value) {
    names_.push_back(std::move(name));
    values_.push_back(value);
  }
  void append(const FeatureVector& other, std::string_view prefix = {}) {
    for (std::size_t i = 0; i < other.size(); ++i) {
      add(std::string(prefix) + other.names_[i], other.values_[i]);
    }
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& values() const { return values_; }

  /// Value for `name`; throws std::out_of_range if absent.
  double operator[](std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return values_[i];
    }
    throw std::out_of_range("no feature named " + std::string(name));
  }

  bool has_undefined() const {
    for (double v : values_) {
      if (!std::isfinite(v)) return true;
    }
    return false;
  }

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

}  // namespace scmkit
