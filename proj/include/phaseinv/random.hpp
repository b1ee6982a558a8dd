#pragma once

#include <cstdint>
#include <random>

#include "phaseinv/core.hpp"

namespace phaseinv {

/// splitmix64 finaliser; used to derive independent substreams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic generator for the (seed, index) substream.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 0x5851f42d4c957f2dULL)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_phase(std::mt19937_64& rng) { return kTwoPi * uniform01(rng); }

/// Uniform state on the N-torus, rejected until every pair is farther apart
/// than min_separation.
PhaseVector random_separated_state(int n, double min_separation, std::mt19937_64& rng);

}  // namespace phaseinv
