#pragma once

#include <cstdint>
#include <string_view>

namespace misdef {

/// Deterministic 64-bit generator (splitmix64 step function). The mapping from
/// seed to output sequence is fully specified here, so any two builds replay
/// identical streams for the same seed. Every randomized component takes its
/// seed through derive_seed so that streams for different roles never overlap.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Unbiased integer in [0, n) via multiply-shift rejection; n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// Derives the seed for a named stream from a master seed. Documented in the
/// file-format notes: h = fnv1a64(role); s = mix(master ^ h); s = mix(s + index * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t master, std::string_view role, std::uint64_t index = 0);

}  // namespace misdef
