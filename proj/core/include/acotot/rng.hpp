#pragma once

#include <cstdint>
#include <random>

#include "acotot/hashing.hpp"

namespace acotot {

using Rng = std::mt19937_64;

/// Uniform draw on [0, 1). Unlike std::uniform_real_distribution the result
/// is identical across standard library implementations.
inline double uniform01(Rng& rng) { return unit_interval(rng()); }

/// Independent stream for (seed, a, b), e.g. (run seed, iteration, ant).
inline Rng derive_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return Rng(hash_combine(hash_combine(splitmix64(seed), a), b));
}

}  // namespace acotot
