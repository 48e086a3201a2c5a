#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rirlab {

using Rng = std::mt19937_64;

// Mixes a 64-bit value; used to derive independent generator seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for the sub-stream identified by (global_seed, sample_id, stage).
// Streams for different stages never share state, so adding a stage does
// not shift the draws of any other stage.
std::uint64_t substream_seed(std::uint64_t global_seed, std::uint64_t sample_id,
                             std::string_view stage);

inline Rng make_rng(std::uint64_t global_seed, std::uint64_t sample_id,
                    std::string_view stage) {
  return Rng(substream_seed(global_seed, sample_id, stage));
}

// Uniform on [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace rirlab
