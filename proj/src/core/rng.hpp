// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kpic {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; combines a base seed with a stream index so
/// per-job / per-restart streams stay decorrelated and reproducible.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

/// Uniform double in [0, 1). Hand-rolled instead of
/// std::uniform_real_distribution, whose output is implementation-defined.
inline double rand_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). n must be > 0.
inline uint64_t rand_index(Rng& rng, uint64_t n) {
  return static_cast<uint64_t>(rand_unit(rng) * static_cast<double>(n)) % n;
}

/// Standard normal via Box-Muller (deterministic across platforms).
inline double rand_normal(Rng& rng) {
  double u1 = 0.0;
  do {
    u1 = rand_unit(rng);
  } while (u1 <= 0.0);
  double u2 = rand_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace kpic
