#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace krvqr {

// mt19937_64 output is fully specified by the standard, so it is byte-stable
// across platforms. std::shuffle and the std distributions are not, which is
// why the draws below are hand-rolled.
using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-stream seed: master seed mixed with a string salt.
inline uint64_t mix_seed(uint64_t seed, std::string_view salt) {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : salt) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return splitmix64(seed ^ h);
}

// Unbiased draw from [0, n) by rejection.
inline size_t rand_below(Rng &rng, size_t n) {
  if (n <= 1) return 0;
  uint64_t bound = n;
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return static_cast<size_t>(v % bound);
}

// Uniform in [0, 1) with 53 bits of precision.
inline double rand_unit(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double rand_range(Rng &rng, double lo, double hi) {
  return lo + (hi - lo) * rand_unit(rng);
}

// Fisher-Yates with explicit draws; deterministic across platforms.
template <typename T>
void shuffle_deterministic(std::vector<T> &items, Rng &rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = rand_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace krvqr
