#pragma once

#include <cstdint>
#include <random>

namespace dicke {

/// SplitMix64 finalizer; used to derive independent per-item seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for work item `stream` of a run seeded with `seed`.
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Generator for work item `stream` of a run seeded with `seed`. Depends only
/// on (seed, stream), so results do not depend on scheduling order.
[[nodiscard]] inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(stream_seed(seed, stream));
}

}  // namespace dicke
