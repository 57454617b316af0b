#include "misdef/rng.hpp"

#include "misdef/error.hpp"

namespace misdef {

namespace {

std::uint64_t splitmix_step(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "uniform_below requires n > 0");
  // Lemire multiply-shift with rejection of the biased low range.
  while (true) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < n) {
      std::uint64_t threshold = (0 - n) % n;
      if (low < threshold) continue;
    }
    return static_cast<std::uint64_t>(m >> 64);
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view role, std::uint64_t index) {
  std::uint64_t s = splitmix_step(master ^ fnv1a64(role));
  return splitmix_step(s + index * 0x9E3779B97F4A7C15ULL);
}

}  // namespace misdef
