#pragma once

#include <cstdint>

namespace linext {

// All randomness in the library flows through SplitMix64 (Steele/Lea/Vigna,
// "Fast splittable pseudorandom number generators"). It is seedable,
// splittable via derive_seed below, and its output is pure 64-bit integer
// arithmetic, so streams are identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random mantissa bits. Never returns 1.0.
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// SplitMix64 output finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Substream derivation: hash the parent seed with a stream index. Used to
// give each poset and each sample its own independent generator, so results
// do not depend on scheduling or worker count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

}  // namespace linext
