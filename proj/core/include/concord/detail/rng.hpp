#pragma once

#include <cstdint>
#include <random>

namespace concord::detail {

// std::mt19937_64 produces an identical bit stream everywhere, but the
// standard distributions (<random>'s uniform_real/uniform_int) are allowed
// to differ between library implementations.  These hand-rolled mappings
// keep runs byte-for-byte reproducible across platforms.

// Uniform double in [0, 1): top 53 bits of one draw.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) via multiply-shift.  The modulo bias is
// below 2^-40 for the small bounds used here, which is far under anything
// observable in this application.
inline int uniform_index(std::mt19937_64& rng, int bound) {
  using u128 = unsigned __int128;
  return static_cast<int>(
      (static_cast<u128>(rng()) * static_cast<u128>(bound)) >> 64);
}

// Uniform double in [-half_width, half_width].
inline double uniform_symmetric(std::mt19937_64& rng, double half_width) {
  return (2.0 * uniform_unit(rng) - 1.0) * half_width;
}

}  // namespace concord::detail
