#pragma once

#include <cmath>
#include <random>

#include "edgpe/commands.hpp"
#include "edgpe/io.hpp"

namespace edgpe::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline ModelParams params(double l1, double l2, double l3 = 1.0, double p = 5.0) {
  ModelParams m;
  m.lambda1 = l1;
  m.lambda2 = l2;
  m.lambda3 = l3;
  m.p = p;
  return m;
}

inline WaveField smooth_field(const Grid3D& g, std::uint64_t seed, int blobs = 3) {
  std::mt19937_64 rng(seed);
  return random_smooth_field(g, rng, blobs);
}

}  // namespace edgpe::test
