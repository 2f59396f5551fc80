#pragma once

#include <complex>
#include <cstdint>

namespace rim {

/// Deterministic child-seed derivation. Stream i of master seed s is
/// splitmix64(s + (i+1)*golden_gamma), so (seed, stream) pairs map to
/// independent generator states reproducibly across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Small counter-free PRNG (xoshiro256**) with explicit, portable
/// distributions. std:: distributions are implementation-defined, which
/// would break byte-identical reruns across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (cached second deviate).
  double normal();
  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance);
  /// Poisson-distributed count (inversion for small mean, PTRD-style
  /// normal-rejection fallback for large mean).
  long poisson(double mean);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace rim
