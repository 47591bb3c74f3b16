#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace alperf {

using RandomStream = std::mt19937_64;

/// Stage tags used as path elements below the repetition index.
namespace stage {
inline constexpr std::uint64_t kTrain = 101;
inline constexpr std::uint64_t kAcquire = 102;
inline constexpr std::uint64_t kPool = 103;
inline constexpr std::uint64_t kTrueBaseline = 104;
inline constexpr std::uint64_t kSubsample = 105;
inline constexpr std::uint64_t kEstimator = 106;
inline constexpr std::uint64_t kHoldout = 107;
inline constexpr std::uint64_t kFolds = 108;
}  // namespace stage

/// Maps (master seed, path) to an independent engine state.
///
/// The path is folded into the seed with a SplitMix64 finalizer per element
/// (position-dependent), and the resulting 128 bits seed the engine through
/// std::seed_seq. Equal inputs give equal streams on every platform.
RandomStream derive_substream(std::uint64_t master_seed, std::span<const std::uint64_t> path);
RandomStream derive_substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace alperf
