#pragma once

#include <cstdint>

namespace odetree {

// Counter-keyed pseudo-random stream (splitmix64). The state is derived
// from a global seed and a sample index, so sample i sees the same draws
// no matter which worker generates it.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t sample_index) {
    state_ = mix(seed + 0x9E3779B97F4A7C15ULL * (sample_index + 1));
    state_ = mix(state_ ^ 0xD1B54A32D192ED03ULL);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // strictly inside (0,1) so that log() stays finite
  double uniform() { return ((next_u64() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace odetree
