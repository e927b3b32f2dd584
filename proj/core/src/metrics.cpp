#include "spiral/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "spiral/signal.hpp"

namespace spiral {

double rmse_percent(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("rmse_percent: size mismatch");
  const double truth_norm = norm2(truth);
  if (truth_norm == 0.0) throw std::invalid_argument("rmse_percent: zero reference");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = estimate[i] - truth[i];
    acc += d * d;
  }
  return 100.0 * std::sqrt(acc) / truth_norm;
}

}  // namespace spiral
