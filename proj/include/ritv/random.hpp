#pragma once

// Seeded randomness with a fixed algorithm identity: mt19937_64 for the bit
// stream, 53-bit mantissa uniforms and Box–Muller normals derived by hand so
// results do not depend on the standard library's distribution objects.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace ritv {

using Rng = std::mt19937_64;

/// Uniform on [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Two independent N(0, 1) samples.
inline std::pair<double, double> normal_pair(Rng& rng) {
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(rng);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace ritv
