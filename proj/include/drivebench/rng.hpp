#pragma once

#include <cstdint>
#include <string_view>

namespace drivebench::rng {

// Counter-based generator: every draw is a pure function of (seed, key...).
// Streams derived from the same seed and key chain are reproducible no matter
// in which order or on which thread they are evaluated.

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t seed, std::uint64_t key) {
  return mix(seed ^ (key + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix(h);
}

// 53-bit mantissa draw in [0, 1).
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t key) {
  return to_unit(combine(seed, key));
}

// Sequential stream (splitmix64) for places where a draw order exists anyway.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  double uniform() { return to_unit(next()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace drivebench::rng
