// Reproducible, parallelism-invariant randomness.
//
// One master 64-bit seed. Every (stage, step, particle/repeat) tuple is mixed
// into an independent substream key (SplitMix64 finalizer rounds), and the key
// seeds its own engine. Work split across threads therefore consumes identical
// random numbers regardless of worker count or scheduling order. Distribution
// helpers are hand-rolled so draws do not depend on the standard library's
// unspecified std::uniform_*_distribution algorithms.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace permsmc {

using Engine = std::mt19937_64;

// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Substream key for (seed; a, b, c). Successive additions of the SplitMix64
// increment keep distinct tuples on well-separated trajectories.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  std::uint64_t z = mix64(seed + kGamma);
  z = mix64(z + a + kGamma);
  z = mix64(z + b + kGamma);
  z = mix64(z + c + kGamma);
  return z;
}

// Stage tags keeping substreams for different purposes disjoint.
namespace rng_stage {
constexpr std::uint64_t kInit = 1;
constexpr std::uint64_t kMutate = 2;
constexpr std::uint64_t kResample = 3;
constexpr std::uint64_t kRepeat = 4;
constexpr std::uint64_t kAnneal = 5;
}  // namespace rng_stage

inline Engine make_engine(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0) {
  return Engine(substream_key(seed, a, b, c));
}

// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform01(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, m), m >= 1, by rejection.
inline std::uint64_t uniform_below(Engine& g, std::uint64_t m) {
  const std::uint64_t limit = ~0ull - ~0ull % m;  // largest multiple of m
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % m;
}

inline int uniform_int(Engine& g, int m) {
  return static_cast<int>(uniform_below(g, static_cast<std::uint64_t>(m)));
}

// Fisher-Yates shuffle of out[0..size), used for uniform bijection sampling.
template <typename Int>
void random_permutation(Engine& g, std::vector<Int>& out) {
  const int n = static_cast<int>(out.size());
  for (int i = 0; i < n; ++i) out[i] = static_cast<Int>(i);
  for (int i = n - 1; i > 0; --i) {
    const int j = uniform_int(g, i + 1);
    std::swap(out[i], out[j]);
  }
}

}  // namespace permsmc
