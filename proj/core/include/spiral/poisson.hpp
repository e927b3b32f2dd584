#pragma once

#include <cstddef>
#include <span>

#include "spiral/linear_map.hpp"
#include "spiral/signal.hpp"

namespace spiral {

inline constexpr double kDefaultBeta = 1e-10;

// Negative Poisson log-likelihood data term for y ~ Poisson(A f + b).
struct PoissonModel {
  LinearMapPtr system;  // A, nonnegative entries
  Vector counts;        // y, nonnegative integers stored as doubles
  double beta = kDefaultBeta;
  Vector background;    // b; empty means zero

  PoissonModel(LinearMapPtr system, Vector counts, double beta = kDefaultBeta,
               Vector background = {});

  std::size_t n() const { return system->cols(); }
  std::size_t m() const { return system->rows(); }
  const LinearMap& A() const { return *system; }
  double background_at(std::size_t i) const { return background.empty() ? 0.0 : background[i]; }
};

// F(f) = 1^T (A f + b) - sum_i y_i log(A f + b + beta)_i. Entries with y_i = 0
// contribute only their linear term. Throws std::domain_error for infeasible f.
double objective(const PoissonModel& model, const Signal& f);
double objective(const PoissonModel& model, const Signal& f, std::span<const double> Af);

// grad F(f) = A^T 1 - A^T (y / (A f + b + beta)), computed with one adjoint
// application.
Vector gradient(const PoissonModel& model, const Signal& f);
Vector gradient(const PoissonModel& model, const Signal& f, std::span<const double> Af);

// delta^T grad^2 F(f) delta = sum_i y_i (A delta)_i^2 / (A f + b + beta)_i^2.
// Uses only cached products, no operator application.
double curvature_form(const PoissonModel& model, std::span<const double> Af,
                      std::span<const double> A_delta);

// max(y) / beta^2 * max(A^T 1) * max(A 1). A bound on the gradient Lipschitz
// constant over the nonnegative orthant; diagnostic only.
double lipschitz_bound(const PoissonModel& model);

// Largest eigenvalue of grad^2 F(f), estimated by matrix-free power iteration
// (two operator applications per step).
double hessian_power_estimate(const PoissonModel& model, const Signal& f,
                              std::size_t iterations = 200);

}  // namespace spiral
