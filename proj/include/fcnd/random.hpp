#pragma once

#include <cstdint>
#include <random>

namespace fcnd {

using Rng = std::mt19937_64;

// std::uniform_int_distribution is implementation-defined; these helpers keep
// seeded runs identical across standard libraries.

/// Uniform draw from [0, n). n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

/// Uniform integer in [lo, hi].
inline long long uniform_int(Rng& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// splitmix64 finalizer; derives independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace fcnd
