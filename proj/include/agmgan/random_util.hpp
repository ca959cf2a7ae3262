#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace agmgan {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash-combines the parts into one stream seed; used to derive independent,
// reproducible rng streams per (seed, phase, iteration, vertex).
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8f3ad1b6c52e9a47ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

inline std::mt19937_64 rng_stream(std::initializer_list<std::uint64_t> parts) {
  return std::mt19937_64(mix_seed(parts));
}

// k distinct values from [0, n), Floyd's algorithm; order is not meaningful.
inline std::vector<int> sample_distinct(int n, int k, std::mt19937_64& rng) {
  std::vector<int> out;
  out.reserve(k);
  for (int j = n - k; j < n; ++j) {
    std::uniform_int_distribution<int> pick(0, j);
    const int t = pick(rng);
    bool seen = false;
    for (int x : out) {
      if (x == t) {
        seen = true;
        break;
      }
    }
    out.push_back(seen ? j : t);
  }
  return out;
}

}  // namespace agmgan
