// Seeded random streams: every stochastic component draws from its own
// stream keyed by (base seed, component label, index), so runs replay
// bit-identically and components can be reordered without cross-talk.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace freshedge {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t stream_seed(uint64_t base_seed, std::string_view label, uint64_t index = 0) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(base_seed ^ h) ^ index);
}

inline std::mt19937_64 make_stream(uint64_t base_seed, std::string_view label, uint64_t index = 0) {
  return std::mt19937_64(stream_seed(base_seed, label, index));
}

// Gaussian truncated to [lo, hi] by rejection; falls back to uniform if the
// window is further than ~6 sigma from the mean (never the case for the
// task-size defaults).
inline double sample_truncated_gaussian(std::mt19937_64& rng, double mean, double stddev,
                                        double lo, double hi) {
  std::normal_distribution<double> normal(mean, stddev);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double v = normal(rng);
    if (v >= lo && v <= hi) return v;
  }
  std::uniform_real_distribution<double> uniform(lo, hi);
  return uniform(rng);
}

}  // namespace freshedge
