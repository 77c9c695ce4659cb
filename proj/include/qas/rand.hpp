#pragma once

// Deterministic RNG helpers. std::uniform_*_distribution is
// implementation-defined, so draws that must reproduce bit-for-bit across
// toolchains go through these instead.

#include <cstdint>
#include <random>

namespace qas {

using Rng = std::mt19937_64;

/// splitmix64 mix; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream));
}

/// Uniform integer in [0, n). Modulo bias is < n / 2^64.
inline std::uint64_t bounded_int(Rng& rng, std::uint64_t n) { return rng() % n; }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(Rng& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [0, 2*pi).
inline double uniform_angle(Rng& rng) {
  return uniform_double(rng) * 6.283185307179586476925286766559;
}

}  // namespace qas
