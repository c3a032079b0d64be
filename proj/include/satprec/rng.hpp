// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace satprec {

// Purpose tags for deriving independent per-drop streams.
enum class RngPurpose : std::uint64_t {
  UserPlacement = 0x1,
  RainFading = 0x2,
  TestData = 0x100,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. Draws are produced with hand-rolled
// transforms on top of mt19937_64 so sequences are identical across
// standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(key) {}

  // Counter-based derivation: (master seed, drop index, purpose) -> stream.
  static Rng stream(std::uint64_t master_seed, std::uint64_t drop_index, RngPurpose purpose) {
    std::uint64_t key = splitmix64(master_seed);
    key = splitmix64(key ^ (0xd1b54a32d192ed03ULL * (drop_index + 1)));
    key = splitmix64(key ^ (0x8cb92ba72f3d8dd7ULL * static_cast<std::uint64_t>(purpose)));
    return Rng(key);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the pair's second member is discarded
  // so the draw count per call is fixed.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Circularly-symmetric complex Gaussian, unit variance.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace satprec
