#pragma once

#include <cstdint>
#include <random>

#include "spiral/signal.hpp"

namespace spiral::test {

inline Vector uniform_vector(std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Vector normal_vector(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> dist(0.0, sd);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace spiral::test
