#pragma once

#include <cstdint>
#include <random>

namespace bbs {

/// Reproducible random stream keyed by (seed, stream).
///
/// Distinct stream ids give independent sequences, so work split into
/// fixed-size chunks (one stream per chunk) produces the same output no
/// matter how many threads process the chunks. Variate conversions are
/// written out here rather than taken from <random> distributions, whose
/// algorithms differ between standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Number of failures before the first success when each trial fails with
  /// probability `q`: P(Y = j) = (1 - q) q^j, i.e. Geometric(1 - q).
  std::uint64_t geometric(double q);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bbs
