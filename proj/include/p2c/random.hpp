#pragma once

#include <cstdint>

namespace p2c {

/// Purpose tags keep draws for different decisions on the same voxel and
/// iteration independent. Values are part of the reproducibility contract:
/// never renumber.
enum class Stream : std::uint64_t {
  grow = 1,
  direction = 2,
  invade = 3,
  death = 4,
  seed_pick = 5,
  gauss_radius = 6,
  gauss_angle = 7,
  phantom = 8,
};

/// SplitMix64 output function (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Counter-based hash of (seed, voxel, iteration, stream). Each word is
/// absorbed by xor followed by a golden-ratio add and a full mix64 round, so
/// the result depends only on these four integers:
///
///   h0 = mix64(seed + G)
///   h1 = mix64((h0 ^ voxel) + G)
///   h2 = mix64((h1 ^ iteration) + G)
///   h  = mix64((h2 ^ stream) + G)
///
/// with G = 0x9E3779B97F4A7C15 and all arithmetic modulo 2^64.
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t voxel, std::uint64_t iteration,
                                     Stream stream) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64((h ^ voxel) + kGolden);
  h = mix64((h ^ iteration) + kGolden);
  return mix64((h ^ static_cast<std::uint64_t>(stream)) + kGolden);
}

/// Top 53 bits of the hash scaled into [0, 1). Exact in IEEE double.
constexpr double uniform01(std::uint64_t seed, std::uint64_t voxel, std::uint64_t iteration, Stream stream) noexcept {
  return static_cast<double>(counter_hash(seed, voxel, iteration, stream) >> 11) * 0x1.0p-53;
}

/// Child seed for an independent sub-stream (e.g. the necrosis texture).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return mix64(mix64(seed + kGolden) ^ (salt * kGolden));
}

}  // namespace p2c
