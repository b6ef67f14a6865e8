#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>

namespace scmkit {

/// Splittable pseudo-random stream keyed by (seed, stream id).
///
/// The state is derived by hashing the key with SplitMix64 and the sequence is
/// produced by xoshiro256**. Every variate is computed with integer arithmetic
/// plus IEEE-754 basic operations and <cmath> log/sqrt, so the same key yields
/// the same sequence on any conforming platform. Nothing here goes through
/// <random> distributions, whose output is implementation-defined.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Unbiased uniform integer on [0, bound). bound must be positive.
  std::uint64_t uniform_int(std::uint64_t bound);
  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Independent child stream; the parent sequence is not advanced.
  RngStream fork(std::uint64_t tag) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
  std::optional<double> spare_normal_;
};

/// Per-image seed recorded in manifests; RngStream(image_seed(g, i), 0) is the
/// stream of image i.
std::uint64_t image_seed(std::uint64_t global_seed, std::uint64_t image_index);

/// Stream for image `image_index` of an ensemble generated from `global_seed`.
RngStream split_rng(std::uint64_t global_seed, std::uint64_t image_index);

/// SplitMix64 finalizer; exposed for seed derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace scmkit
