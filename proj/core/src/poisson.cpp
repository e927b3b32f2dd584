#include "spiral/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace spiral {

namespace {

void require_feasible(const Signal& f, std::size_t n) {
  require_size(f.span(), n, "Poisson model signal");
  if (!f.feasible()) throw std::domain_error("Poisson model: signal must be finite and nonnegative");
}

}  // namespace

PoissonModel::PoissonModel(LinearMapPtr system_, Vector counts_, double beta_, Vector background_)
    : system(std::move(system_)),
      counts(std::move(counts_)),
      beta(beta_),
      background(std::move(background_)) {
  if (!system) throw std::invalid_argument("PoissonModel: null system map");
  require_size(counts, system->rows(), "PoissonModel counts");
  if (!(beta > 0.0)) throw std::invalid_argument("PoissonModel: beta must be positive");
  for (double y : counts) {
    if (!(y >= 0.0) || std::floor(y) != y) {
      throw std::invalid_argument("PoissonModel: counts must be nonnegative integers");
    }
  }
  if (!background.empty()) {
    require_size(background, system->rows(), "PoissonModel background");
    for (double b : background) {
      if (!(b >= 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("PoissonModel: background must be nonnegative");
      }
    }
  }
}

double objective(const PoissonModel& model, const Signal& f) {
  require_feasible(f, model.n());
  const Vector Af = model.A().forward(f.values());
  return objective(model, f, Af);
}

double objective(const PoissonModel& model, const Signal& f, std::span<const double> Af) {
  require_feasible(f, model.n());
  require_size(Af, model.m(), "objective cached Af");
  double linear = 0.0;
  double log_term = 0.0;
  for (std::size_t i = 0; i < Af.size(); ++i) {
    const double mean = Af[i] + model.background_at(i);
    linear += mean;
    const double y = model.counts[i];
    if (y != 0.0) log_term += y * std::log(mean + model.beta);
  }
  return linear - log_term;
}

Vector gradient(const PoissonModel& model, const Signal& f) {
  require_feasible(f, model.n());
  const Vector Af = model.A().forward(f.values());
  return gradient(model, f, Af);
}

Vector gradient(const PoissonModel& model, const Signal& f, std::span<const double> Af) {
  require_feasible(f, model.n());
  require_size(Af, model.m(), "gradient cached Af");
  // A^T 1 - A^T (y / (Af + b + beta)) = A^T (1 - y / (Af + b + beta))
  Vector weights(Af.size());
  for (std::size_t i = 0; i < Af.size(); ++i) {
    const double y = model.counts[i];
    weights[i] = y == 0.0 ? 1.0 : 1.0 - y / (Af[i] + model.background_at(i) + model.beta);
  }
  return model.A().adjoint(weights);
}

double curvature_form(const PoissonModel& model, std::span<const double> Af,
                      std::span<const double> A_delta) {
  require_size(Af, model.m(), "curvature_form cached Af");
  require_size(A_delta, model.m(), "curvature_form cached A delta");
  double acc = 0.0;
  for (std::size_t i = 0; i < Af.size(); ++i) {
    const double y = model.counts[i];
    if (y == 0.0) continue;
    const double ratio = A_delta[i] / (Af[i] + model.background_at(i) + model.beta);
    acc += y * ratio * ratio;
  }
  return acc;
}

double lipschitz_bound(const PoissonModel& model) {
  const double y_max = max_value(model.counts);
  if (!(y_max > 0.0)) return 0.0;
  const Vector ones_n(model.n(), 1.0);
  const Vector ones_m(model.m(), 1.0);
  const double column_max = max_value(model.A().adjoint(ones_m));
  const double row_max = max_value(model.A().forward(ones_n));
  return y_max / (model.beta * model.beta) * column_max * row_max;
}

double hessian_power_estimate(const PoissonModel& model, const Signal& f, std::size_t iterations) {
  require_feasible(f, model.n());
  const Vector Af = model.A().forward(f.values());
  Vector weights(model.m());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double d = Af[i] + model.background_at(i) + model.beta;
    weights[i] = model.counts[i] / (d * d);
  }
  Vector v(model.n());
  // Deterministic, not orthogonal to the leading eigenvector of a nonnegative A.
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = 1.0 + 0.01 * static_cast<double>(j % 7);
  double scale = norm2(v);
  for (double& x : v) x /= scale;
  double lambda = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    Vector Av = model.A().forward(v);
    for (std::size_t i = 0; i < Av.size(); ++i) Av[i] *= weights[i];
    Vector Hv = model.A().adjoint(Av);
    lambda = dot(v, Hv);
    scale = norm2(Hv);
    if (scale == 0.0) return 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = Hv[j] / scale;
  }
  return lambda;
}

}  // namespace spiral
