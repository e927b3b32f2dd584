#pragma once

#include <cstdint>

#include "spiral/linear_map.hpp"
#include "spiral/signal.hpp"

namespace spiral {

// Counter-based generator: the stream for (seed, key) is reproducible no
// matter which thread draws it or in which order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t key) noexcept;
  std::uint64_t next() noexcept;
  double uniform() noexcept;  // in (0, 1)
  double normal() noexcept;

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Inversion below 30, PTRS (Hormann) above.
std::uint64_t poisson_draw(double mean, CounterRng& rng);

struct PoissonSample {
  Vector counts;
  Vector mean;        // scale * A f
  Signal scaled_truth;
  double scale = 1.0;
};

// Scales f so the expected total count equals `target_total`, then draws
// y_i ~ Poisson((A f)_i) with bin i keyed by (seed, i).
PoissonSample sample_poisson(const LinearMap& system, const Signal& truth, double target_total,
                             std::uint64_t seed);

}  // namespace spiral
