#ifndef SILVERDT_RANDOM_UTIL_HPP
#define SILVERDT_RANDOM_UTIL_HPP

#include <cstdint>
#include <string_view>

#include "silverdt/chart.hpp"

namespace silverdt::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Uniform on [0, 1) from the top 53 bits.
inline double unit(Rng& rng) { return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0); }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % range);
}

}  // namespace silverdt::detail

#endif  // SILVERDT_RANDOM_UTIL_HPP
