#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace skqa {

// Counter-based randomness: every variate is a pure function of a 64-bit key
// and a 64-bit counter, so generation order does not matter and parallel
// producers agree bit for bit.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Uniform double in (0, 1], from the top 53 bits.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(std::uint64_t key, std::uint64_t ctr) {
  return bits_to_unit(splitmix64(key ^ splitmix64(ctr + 0x632be59bd9b4e019ULL)));
}

/// One standard normal per (key, ctr) via Box-Muller on two derived uniforms.
inline double gaussian(std::uint64_t key, std::uint64_t ctr) {
  const std::uint64_t s = splitmix64(key ^ splitmix64(ctr));
  const double u = bits_to_unit(splitmix64(s));
  const double v = bits_to_unit(splitmix64(s ^ 0xda3e39cb94b95bdbULL));
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace skqa
