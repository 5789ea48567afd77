#pragma once

#include <cstdint>
#include <random>

#include "cayley/octonion.hpp"

namespace cayley {

/// SplitMix64 finalizer; used to derive independent sub-streams from
/// (seed, index) pairs so that batched work is order-independent.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator. mt19937_64 output is fixed by the standard; the
/// real-valued draws are computed here rather than through <random>
/// distributions so that results match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal (Box-Muller, one value per call).
  double normal();
  double exponential();
  /// Gamma(shape, 1) by Marsaglia-Tsang.
  double gamma(double shape);

  /// Uniformly distributed point of the closed unit ball in R^8.
  Octonion unit_ball_octonion();
  /// Uniformly distributed unit octonion.
  Octonion unit_octonion();
  Octonion normal_octonion();

 private:
  std::mt19937_64 engine_;
};

}  // namespace cayley
