#pragma once

#include <cstdint>
#include <random>

namespace anc {

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

using RngStream = std::mt19937_64;

// Deterministic stream derivation: (master, a, b) -> independent stream.
// Used as (master_seed, grid_point_index, trial_index) by the sweep harness.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ (a + 0x9E3779B97F4A7C15ull));
  s = mix64(s ^ (b + 0xD1B54A32D192ED03ull));
  return s;
}

inline RngStream make_stream(std::uint64_t master, std::uint64_t a = 0,
                             std::uint64_t b = 0) {
  return RngStream(derive_seed(master, a, b));
}

}  // namespace anc
