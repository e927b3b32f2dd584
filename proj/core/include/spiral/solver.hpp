#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spiral/penalty.hpp"
#include "spiral/poisson.hpp"
#include "spiral/signal.hpp"

namespace spiral {

struct SolverConfig {
  double tau = 1.0;           // penalty weight, >= 0
  double eta = 2.0;           // backtracking multiplier, > 1
  double sigma = 0.1;         // sufficient decrease, in (0, 1)
  std::size_t window = 10;    // M: nonmonotone window length
  double alpha_min = 1e-30;
  double alpha_max = 1e30;
  double tol = 5e-4;          // outer tolerance tolP
  std::size_t min_iter = 50;
  std::size_t max_iter = 1000;
  bool acceptance_enabled = true;
  bool stop_on_iterate_change = true;
  bool stop_on_objective_change = true;
  bool stop_on_kkt = false;   // wavelet l1 only
  PenaltyKind penalty = PenaltyKind::kCanonicalL1;
  SubConfig sub;

  // Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

enum class TerminationReason { kIterateChange, kObjectiveChange, kKkt, kMaxIter };

std::string to_string(TerminationReason reason);

struct TraceRecord {
  std::size_t k = 0;               // iterate index after the step
  double objective = 0.0;          // Phi(f^k)
  double alpha = 0.0;              // accepted alpha
  std::size_t backtracks = 0;
  double elapsed_seconds = 0.0;
  std::optional<double> rmse;      // vs the supplied truth, percent
  std::size_t forward_applications = 0;
  std::size_t adjoint_applications = 0;
  double relative_change = 0.0;    // ||f^k - f^{k-1}|| / ||f^{k-1}||
  double step_norm = 0.0;          // ||f^k - f^{k-1}||
  double window_max = 0.0;         // max of Phi over the window before the step
  std::size_t inner_iterations = 0;
  double kkt_residual = -1.0;      // negative when not computed
  bool alpha_overflow = false;     // accepted without meeting the acceptance test
};

struct SolverResult {
  Signal estimate;
  std::vector<TraceRecord> trace;
  TerminationReason reason = TerminationReason::kMaxIter;
  std::size_t iterations = 0;
  double initial_objective = 0.0;
  std::size_t setup_applications = 0;
  std::vector<std::string> warnings;
};

struct IterateState {
  std::size_t k = 0;
  Signal f;
  Vector Af;
  Vector grad;
  double alpha = 1.0;
  double objective = 0.0;
  std::deque<double> objective_window;  // Phi over the last M + 1 iterates
  Vector delta_prev;                    // f^k - f^{k-1}
  Vector A_delta_prev;                  // A f^k - A f^{k-1}

  // Phi(f^{l(k)})
  double window_max() const;
};

// Rayleigh quotient of the Hessian along the last step, clamped to
// [alpha_min, alpha_max]; 0/0 clamps to alpha_min.
double bb_alpha_init(const PoissonModel& model, std::span<const double> Af,
                     std::span<const double> delta, std::span<const double> A_delta,
                     double alpha_min, double alpha_max);
double bb_alpha_init(const PoissonModel& model, const IterateState& state,
                     const SolverConfig& config);

// s = f - grad / alpha
Vector gradient_step(std::span<const double> f, std::span<const double> grad, double alpha);
Vector gradient_step(const IterateState& state, double alpha);

// Phi(f_new) <= window_max - sigma * alpha / 2 * ||f_new - f||^2
bool acceptance_check(double objective_new, double window_max, double sigma, double alpha,
                      std::span<const double> f_new, std::span<const double> f);
bool acceptance_check(double objective_new, const IterateState& state, double sigma,
                      double alpha, const Signal& f_new);

// ||f_next - f|| / ||f|| <= tol, or ||f_next|| <= tol when f = 0.
bool terminate_iterate_change(std::span<const double> f_next, std::span<const double> f,
                              double tol);
// |Phi_next - Phi| / |Phi| <= tol, or |Phi_next - Phi| <= tol when Phi = 0.
bool terminate_objective_change(double objective_next, double objective, double tol);

// KKT residual for the wavelet-l1 problem min F(W theta) + tau ||theta||_1
// s.t. W theta >= 0, evaluated in the split coordinates theta = u - v:
// coordinates with theta_i != 0 contribute (W^T grad - W^T lambda)_i +
// tau sign(theta_i); zero coordinates contribute the distance of that
// quantity's smooth part from [-tau, tau]. `lambda` is the multiplier of the
// outer problem (the subproblem multiplier scaled by alpha).
double kkt_residual(std::span<const double> grad_f, std::span<const double> theta,
                    std::span<const double> lambda, const OrthoBasis& basis, double tau);
double kkt_residual(const PoissonModel& model, std::span<const double> theta,
                    std::span<const double> lambda, const OrthoBasis& basis, double tau);

// Runs the method from f0 >= 0. `truth`, when given, adds RMSE to each trace
// record. Throws std::runtime_error if a subproblem returns an infeasible
// point.
SolverResult run(const PoissonModel& model, const SolverConfig& config, const Signal& f0,
                 const Signal* truth = nullptr);

// k,objective,alpha,backtracks,elapsed_seconds,rmse
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace spiral
