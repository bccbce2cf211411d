#pragma once

// Seeded random generation for the thinning operators.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. All distributions are implemented here rather than taken from
// <random>, whose distribution algorithms are implementation-defined:
//   uniform   53 high bits of one engine output, scaled to [0, 1)
//   Poisson   sequential inversion for rate < 10, PTRS (Hoermann 1993) above
//   binomial  sequential inversion for n min(p, 1-p) < 10, BTRD (Hoermann 1993) above
//   geometric inversion on support {1, 2, ...}
// so a given seed yields the same draws on every conforming platform.

#include <cstdint>
#include <random>
#include <utility>

namespace inarma {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1), safe to take logs of.
  double uniform_open();
  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();

  /// Draw from Pois(rate); rate >= 0.
  std::int64_t poisson(double rate);
  /// Draw from Bin(n, p); n >= 0, 0 <= p <= 1.
  std::int64_t binomial(std::int64_t n, double p);

 private:
  std::int64_t poisson_inversion(double rate);
  std::int64_t poisson_ptrs(double rate);
  std::int64_t binomial_inversion(std::int64_t n, double p);
  std::int64_t binomial_btrd(std::int64_t n, double p);

  std::mt19937_64 engine_;
};

/// alpha o y: Bin(y, alpha).
std::int64_t binomial_thin(RandomStream& stream, double alpha, std::int64_t y);

/// alpha * y: Pois(alpha y), degenerate at zero when alpha y == 0. y may be real.
std::int64_t poisson_star(RandomStream& stream, double alpha, double y);

/// Splits s into (phi o s, remainder), the two parts always summing to s.
std::pair<std::int64_t, std::int64_t> partition_thin(RandomStream& stream, double phi,
                                                     std::int64_t s);

/// Number of trials up to and including the first success, P(i) = phi (1-phi)^(i-1), i >= 1.
std::int64_t geometric_waiting(RandomStream& stream, double phi);

}  // namespace inarma
