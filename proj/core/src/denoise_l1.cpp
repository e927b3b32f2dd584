#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spiral/denoisers.hpp"

namespace spiral {

Signal denoise_canonical_l1(const Signal& s, double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("denoise_canonical_l1: kappa must be >= 0");
  Signal f = s;
  for (double& v : f.values()) {
    const double shrunk = v - kappa;
    v = shrunk > 0.0 ? shrunk : 0.0;
  }
  return f;
}

double l1_subproblem_objective(std::span<const double> theta, std::span<const double> s,
                               double kappa) {
  if (theta.size() != s.size()) throw std::invalid_argument("l1_subproblem_objective: sizes");
  double quad = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double d = theta[i] - s[i];
    quad += d * d;
    l1 += std::abs(theta[i]);
  }
  return 0.5 * quad + kappa * l1;
}

L1DualResult denoise_l1_dual(std::span<const double> s, double kappa, const OrthoBasis& basis,
                             const L1DualOptions& options, std::span<const double> lambda_init) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("denoise_l1_dual: kappa must be finite and >= 0");
  }
  const std::size_t n = basis.size();
  require_size(s, n, "denoise_l1_dual coefficients");

  L1DualResult result;
  result.lambda.assign(n, 0.0);
  if (!lambda_init.empty()) {
    require_size(lambda_init, n, "denoise_l1_dual warm start");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(lambda_init[i] >= 0.0)) {
        throw std::invalid_argument("denoise_l1_dual: warm-start multiplier must be >= 0");
      }
      result.lambda[i] = lambda_init[i];
    }
  }
  result.gamma.assign(n, 0.0);
  result.theta.assign(n, 0.0);
  Vector f_values(n, 0.0);
  if (basis.is_2d()) {
    result.f = Signal(f_values, basis.shape());
  } else {
    result.f = Signal(f_values);
  }

  const double half_s_sq = 0.5 * squared_norm(s);
  Vector wt_lambda = basis.analysis(result.lambda);
  Vector shifted(n);
  Vector synth(n);
  const std::size_t max_iter = std::max<std::size_t>(options.max_iter, 1);

  for (std::size_t sweep = 1; sweep <= max_iter; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      result.gamma[i] = std::clamp(-s[i] - wt_lambda[i], -kappa, kappa);
      shifted[i] = s[i] + result.gamma[i];
    }
    basis.synthesis(shifted, synth);
    double min_constraint = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      result.lambda[i] = synth[i] < 0.0 ? -synth[i] : 0.0;
      f_values[i] = synth[i] > 0.0 ? synth[i] : 0.0;
      min_constraint = i == 0 ? f_values[i] : std::min(min_constraint, f_values[i]);
    }
    basis.analysis(result.lambda, wt_lambda);
    for (std::size_t i = 0; i < n; ++i) result.theta[i] = shifted[i] + wt_lambda[i];

    const double h = 0.5 * squared_norm(result.theta) - half_s_sq;
    result.primal = l1_subproblem_objective(result.theta, s, kappa);
    result.dual = -h;
    const double denom = std::abs(result.primal);
    result.gap = denom > 0.0 ? std::abs(result.primal + h) / denom : std::abs(result.primal + h);
    result.sweeps = sweep;
    if (options.record_trace) {
      result.trace.push_back({sweep, result.primal, result.dual, result.gap, min_constraint});
    }
    if (sweep >= options.min_iter && result.gap <= options.tol) break;
  }
  result.f.values() = std::move(f_values);
  return result;
}

}  // namespace spiral
