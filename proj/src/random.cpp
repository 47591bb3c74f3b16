#include "alperf/random.hpp"


namespace alperf {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream derive_substream(std::uint64_t master_seed, std::span<const std::uint64_t> path) {
  std::uint64_t lo = splitmix64(master_seed);
  std::uint64_t hi = splitmix64(lo ^ 0x6A09E667F3BCC909ULL);
  std::uint64_t position = 0;
  for (std::uint64_t element : path) {
    ++position;
    const std::uint64_t tagged = splitmix64(element + position * 0x9E3779B97F4A7C15ULL);
    lo = splitmix64(lo ^ tagged);
    hi = splitmix64(hi + tagged + lo);
  }
  // Path length is mixed in so that (1) and (1, 0) never coincide.
  hi = splitmix64(hi ^ position);
  std::seed_seq seq{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
                    static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
  return RandomStream(seq);
}

RandomStream derive_substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
  return derive_substream(master_seed, std::span<const std::uint64_t>(path.begin(), path.size()));
}

}  // namespace alperf
