#pragma once

#include <cstdint>

// Counter-based deterministic random numbers. Every variate is a pure
// function of (seed, stream, counter, dim), so bundles are reproducible
// bit-for-bit under any partitioning of the sample index range.

namespace catseye {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix_bits(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix_bits((h + kGolden) ^ mix_bits(v));
}

struct CounterRng {
  std::uint64_t key = 0;

  static CounterRng keyed(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng{hash_combine(mix_bits(seed), stream)};
  }

  std::uint64_t bits(std::uint64_t counter, std::uint32_t dim) const {
    // Random access into a splitmix-style sequence: 8 dims per counter.
    return mix_bits(key + kGolden * (counter * 8 + dim + 1));
  }

  /// Uniform double in [0, 1).
  double uniform(std::uint64_t counter, std::uint32_t dim) const {
    return static_cast<double>(bits(counter, dim) >> 11) * 0x1.0p-53;
  }
};

}  // namespace catseye
