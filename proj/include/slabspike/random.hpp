#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "slabspike/types.hpp"

namespace slabspike {

/// Mixes a base seed with a stream index so chains, sweep rows and injection
/// replicates get decorrelated generators.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double draw_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double draw_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// Gamma(shape, rate).
inline double draw_gamma(Rng& rng, double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

/// InverseGamma(shape, rate): the reciprocal of a Gamma(shape, rate) draw.
inline double draw_inverse_gamma(Rng& rng, double shape, double rate) {
  return 1.0 / draw_gamma(rng, shape, rate);
}

inline bool draw_bernoulli(Rng& rng, double p) { return draw_uniform(rng) < p; }

template <typename Scalar = double>
VectorX<Scalar> draw_normal_vector(Rng& rng, Index size) {
  VectorX<Scalar> v(size);
  for (Index i = 0; i < size; ++i) v[i] = static_cast<Scalar>(draw_normal(rng));
  return v;
}

}  // namespace slabspike
