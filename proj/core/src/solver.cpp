#include "spiral/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "spiral/metrics.hpp"

namespace spiral {

void SolverConfig::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("SolverConfig: tau >= 0");
  if (!(eta > 1.0)) throw std::invalid_argument("SolverConfig: eta must exceed 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("SolverConfig: sigma in (0,1)");
  if (!(alpha_min > 0.0) || !(alpha_min <= alpha_max)) {
    throw std::invalid_argument("SolverConfig: need 0 < alpha_min <= alpha_max");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (max_iter == 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kIterateChange: return "iterate-change";
    case TerminationReason::kObjectiveChange: return "objective-change";
    case TerminationReason::kKkt: return "kkt";
    case TerminationReason::kMaxIter: return "max-iter";
  }
  return "unknown";
}

double IterateState::window_max() const {
  if (objective_window.empty()) return objective;
  return *std::max_element(objective_window.begin(), objective_window.end());
}

double bb_alpha_init(const PoissonModel& model, std::span<const double> Af,
                     std::span<const double> delta, std::span<const double> A_delta,
                     double alpha_min, double alpha_max) {
  const double denom = squared_norm(delta);
  const double numer = curvature_form(model, Af, A_delta);
  const double alpha = numer / denom;  // NaN for 0/0
  if (!(alpha >= alpha_min)) return alpha_min;
  return std::min(alpha, alpha_max);
}

double bb_alpha_init(const PoissonModel& model, const IterateState& state,
                     const SolverConfig& config) {
  if (state.delta_prev.empty()) {
    throw std::invalid_argument("bb_alpha_init: no previous step available");
  }
  return bb_alpha_init(model, state.Af, state.delta_prev, state.A_delta_prev, config.alpha_min,
                       config.alpha_max);
}

Vector gradient_step(std::span<const double> f, std::span<const double> grad, double alpha) {
  if (f.size() != grad.size()) throw std::invalid_argument("gradient_step: size mismatch");
  Vector s(f.size());
  const double inv = 1.0 / alpha;
  for (std::size_t i = 0; i < f.size(); ++i) s[i] = f[i] - inv * grad[i];
  return s;
}

Vector gradient_step(const IterateState& state, double alpha) {
  return gradient_step(state.f.values(), state.grad, alpha);
}

bool acceptance_check(double objective_new, double window_max, double sigma, double alpha,
                      std::span<const double> f_new, std::span<const double> f) {
  if (f_new.size() != f.size()) throw std::invalid_argument("acceptance_check: size mismatch");
  double step_sq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f_new[i] - f[i];
    step_sq += d * d;
  }
  return objective_new <= window_max - 0.5 * sigma * alpha * step_sq;
}

bool acceptance_check(double objective_new, const IterateState& state, double sigma,
                      double alpha, const Signal& f_new) {
  return acceptance_check(objective_new, state.window_max(), sigma, alpha, f_new.values(),
                          state.f.values());
}

bool terminate_iterate_change(std::span<const double> f_next, std::span<const double> f,
                              double tol) {
  if (f_next.size() != f.size()) throw std::invalid_argument("terminate_iterate_change: sizes");
  double change = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f_next[i] - f[i];
    change += d * d;
  }
  const double base = norm2(f);
  if (base == 0.0) return norm2(f_next) <= tol;
  return std::sqrt(change) / base <= tol;
}

bool terminate_objective_change(double objective_next, double objective, double tol) {
  const double change = std::abs(objective_next - objective);
  if (objective == 0.0) return change <= tol;
  return change / std::abs(objective) <= tol;
}

double kkt_residual(std::span<const double> grad_f, std::span<const double> theta,
                    std::span<const double> lambda, const OrthoBasis& basis, double tau) {
  const std::size_t n = basis.size();
  require_size(grad_f, n, "kkt_residual gradient");
  require_size(theta, n, "kkt_residual theta");
  require_size(lambda, n, "kkt_residual lambda");
  const Vector wt_grad = basis.analysis(grad_f);
  const Vector wt_lambda = basis.analysis(lambda);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double smooth = wt_grad[i] - wt_lambda[i];
    double g = 0.0;
    if (theta[i] > 0.0) {
      g = smooth + tau;
    } else if (theta[i] < 0.0) {
      g = smooth - tau;
    } else {
      g = std::max(std::abs(smooth) - tau, 0.0);
    }
    acc += g * g;
  }
  return std::sqrt(acc);
}

double kkt_residual(const PoissonModel& model, std::span<const double> theta,
                    std::span<const double> lambda, const OrthoBasis& basis, double tau) {
  Signal f(basis.synthesis(theta));
  for (double& v : f.values()) v = std::max(v, 0.0);
  const Vector grad = gradient(model, f);
  return kkt_residual(grad, theta, lambda, basis, tau);
}

namespace {

Signal with_shape_of(Vector values, const Signal& like) {
  if (like.is_image()) return Signal(std::move(values), like.image_shape());
  return Signal(std::move(values));
}

}  // namespace

SolverResult run(const PoissonModel& model, const SolverConfig& config, const Signal& f0,
                 const Signal* truth) {
  config.validate();
  require_size(f0.span(), model.n(), "run initial point");
  if (!f0.feasible()) throw std::invalid_argument("run: initial point must be nonnegative");
  if (truth != nullptr) require_size(truth->span(), model.n(), "run truth");

  const LinearMap& A = model.A();
  auto subproblem = make_subproblem_solver(config.penalty, config.sub, model.n(), f0.shape());
  auto* wavelet_l1 = dynamic_cast<WaveletL1Solver*>(subproblem.get());

  SolverResult result;
  IterateState state;
  state.f = f0;
  state.Af = A.forward(f0.values());
  const Vector ones(model.n(), 1.0);
  const Vector A_ones = A.forward(ones);
  result.setup_applications = 2;

  state.objective = objective(model, state.f, state.Af) + config.tau * subproblem->penalty(state.f);
  result.initial_objective = state.objective;
  state.objective_window.assign(config.window + 1, state.objective);

  const auto start = std::chrono::steady_clock::now();
  double previous_alpha = 0.0;

  for (std::size_t k = 0;; ++k) {
    state.k = k;
    state.grad = gradient(model, state.f, state.Af);
    TraceRecord record;
    record.adjoint_applications = 1;

    if (k == 0) {
      // Rayleigh-quotient probe along the all-ones direction.
      const double probe =
          curvature_form(model, state.Af, A_ones) / static_cast<double>(model.n());
      state.alpha = std::clamp(std::isfinite(probe) ? probe : config.alpha_max, config.alpha_min,
                               config.alpha_max);
    } else {
      state.alpha = bb_alpha_init(model, state, config);
    }

    if (wavelet_l1 != nullptr && k > 0 && !wavelet_l1->theta().empty()) {
      Vector scaled_lambda = wavelet_l1->lambda();
      for (double& v : scaled_lambda) v *= previous_alpha;
      record.kkt_residual =
          kkt_residual(state.grad, wavelet_l1->theta(), scaled_lambda, wavelet_l1->basis(),
                       config.tau);
      if (config.stop_on_kkt && k >= config.min_iter && record.kkt_residual <= config.tol) {
        result.reason = TerminationReason::kKkt;
        break;
      }
    }

    const double window_max = state.window_max();
    double alpha = state.alpha;
    SubproblemSolution candidate;
    Vector A_candidate(model.m());
    double candidate_objective = 0.0;
    for (;;) {
      const Signal s = with_shape_of(gradient_step(state, alpha), state.f);
      candidate = subproblem->solve(s, config.tau / alpha);
      if (candidate.f.size() != model.n() || !candidate.f.feasible()) {
        throw std::runtime_error("run: subproblem returned an infeasible point");
      }
      A.apply(candidate.f.values(), A_candidate);
      ++record.forward_applications;
      candidate_objective = objective(model, candidate.f, A_candidate) +
                            config.tau * candidate.penalty;
      if (!config.acceptance_enabled ||
          acceptance_check(candidate_objective, window_max, config.sigma, alpha,
                           candidate.f.values(), state.f.values())) {
        break;
      }
      if (alpha * config.eta > config.alpha_max) {
        record.alpha_overflow = true;
        result.warnings.push_back("iteration " + std::to_string(k) +
                                  ": alpha exceeded alpha_max while backtracking; "
                                  "accepting the last trial");
        break;
      }
      alpha *= config.eta;
      ++record.backtracks;
    }
    subproblem->accept();
    previous_alpha = alpha;

    const bool iterate_converged =
        terminate_iterate_change(candidate.f.values(), state.f.values(), config.tol);
    const bool objective_converged =
        terminate_objective_change(candidate_objective, state.objective, config.tol);
    const double base = norm2(state.f.values());
    const double step = norm2(difference(candidate.f.values(), state.f.values()));
    record.relative_change = base > 0.0 ? step / base : step;
    record.step_norm = step;

    state.delta_prev = difference(candidate.f.values(), state.f.values());
    state.A_delta_prev = difference(A_candidate, state.Af);
    state.f = with_shape_of(std::move(candidate.f.values()), state.f);
    state.Af = std::move(A_candidate);
    state.objective = candidate_objective;
    state.alpha = alpha;
    state.objective_window.push_back(candidate_objective);
    while (state.objective_window.size() > config.window + 1) state.objective_window.pop_front();

    record.k = k + 1;
    record.objective = candidate_objective;
    record.alpha = alpha;
    record.window_max = window_max;
    record.inner_iterations = candidate.inner_iterations;
    record.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (truth != nullptr) record.rmse = rmse_percent(state.f.values(), truth->values());
    result.trace.push_back(record);
    result.iterations = k + 1;

    if (result.iterations >= config.min_iter) {
      if (config.stop_on_iterate_change && iterate_converged) {
        result.reason = TerminationReason::kIterateChange;
        break;
      }
      if (config.stop_on_objective_change && objective_converged) {
        result.reason = TerminationReason::kObjectiveChange;
        break;
      }
    }
    if (result.iterations >= config.max_iter) {
      result.reason = TerminationReason::kMaxIter;
      break;
    }
  }

  result.estimate = std::move(state.f);
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "k,objective,alpha,backtracks,elapsed_seconds,rmse\n";
  out << std::setprecision(12);
  for (const TraceRecord& r : trace) {
    out << r.k << ',' << r.objective << ',' << r.alpha << ',' << r.backtracks << ','
        << r.elapsed_seconds << ',';
    if (r.rmse) out << *r.rmse;
    out << '\n';
  }
}

}  // namespace spiral
