#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mgabor/types.hpp"

namespace mgabor {

// Deterministic random stream. std::mt19937_64 output is pinned by the
// standard, but the std distributions are not, so the mappings from raw
// 64-bit words to doubles live here and never change.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller. No spare caching: two raw draws per
  // call keeps the draw count independent of call history.
  double gauss() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Cplx cgauss() {
    const double re = gauss();
    const double im = gauss();
    return Cplx{re, im};
  }

  std::uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace mgabor
