#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace kkltype {

// std::mt19937_64 is fully specified by the standard, but the std
// distributions are not, so the few variates we need are drawn by hand to
// keep seeded output identical across standard libraries.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller, one variate per call.
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace kkltype
