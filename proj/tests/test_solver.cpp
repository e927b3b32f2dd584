#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "doctest.h"
#include "spiral/linear_map.hpp"
#include "spiral/oracles.hpp"
#include "spiral/phantom.hpp"
#include "spiral/sampling.hpp"
#include "spiral/solver.hpp"
#include "spiral/tomography.hpp"
#include "support.hpp"

using namespace spiral;
using spiral::test::uniform_vector;

namespace {

struct SmallTomography {
  std::shared_ptr<CountingMap> counted;
  std::shared_ptr<PoissonModel> model;
  Signal truth;
  Signal f0;
};

SmallTomography small_tomography(std::size_t side = 16, std::uint64_t seed = 3) {
  const Phantom p = make_phantom(side);
  const TomographyModel tomo = build_tomography(side, side, 20, 135.0, side, p.attenuation);
  const PoissonSample sample = sample_poisson(*tomo.system, p.emission, 2e4, seed);
  SmallTomography out;
  out.counted = std::make_shared<CountingMap>(tomo.system);
  out.model = std::make_shared<PoissonModel>(out.counted, sample.counts);
  out.truth = sample.scaled_truth;
  const double level = sum(sample.counts) / sum(tomo.system->forward(Vector(side * side, 1.0)));
  out.f0 = Signal::constant(Shape{side, side}, level);
  return out;
}

}  // namespace

TEST_SUITE("spiral_solver") {

TEST_CASE("gradient step arithmetic") {
  CHECK(gradient_step(Vector{1, 2}, Vector{0.5, -1}, 2.0) == Vector{0.75, 2.5});
  CHECK(gradient_step(Vector{1, 2}, Vector{0, 0}, 3.0) == Vector{1, 2});
  const Vector f{1, 2, 3};
  const Vector g{0.3, -0.7, 1.1};
  const double d1 = norm2(difference(gradient_step(f, g, 1.5), f));
  const double d2 = norm2(difference(gradient_step(f, g, 3.0), f));
  CHECK(d2 == doctest::Approx(0.5 * d1));
}

TEST_CASE("acceptance check arithmetic") {
  const Vector f{0, 0};
  const Vector f_new{2, 0};  // ||delta||^2 = 4
  CHECK(acceptance_check(9.6, 10.0, 0.1, 2.0, f_new, f));
  CHECK_FALSE(acceptance_check(9.6000001, 10.0, 0.1, 2.0, f_new, f));
  CHECK(acceptance_check(10.0, 10.0, 0.1, 2.0, f, f));
  CHECK_FALSE(acceptance_check(10.5, 10.0, 0.1, 2.0, f, f));
}

TEST_CASE("modified BB step") {
  const double beta = 1e-10;
  const PoissonModel model(std::make_shared<IdentityMap>(3), Vector(3, 1.0), beta);
  const Vector Af(3, 1.0 - beta);
  const Vector delta{0.3, -2.0, 1.0};
  CHECK(bb_alpha_init(model, Af, delta, delta, 1e-30, 1e30) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bb_alpha_init(model, Af, Vector(3, 0.0), Vector(3, 0.0), 1e-30, 1e30) == 1e-30);
  CHECK(bb_alpha_init(model, Af, delta, delta, 2.0, 1e30) == 2.0);
  CHECK(bb_alpha_init(model, Af, delta, delta, 1e-30, 0.5) == 0.5);
}

TEST_CASE("modified BB equals the classical rule on a quadratic") {
  for (const auto& r : oracles::run_suite("bb")) {
    if (r.name == "bb-quadratic") CHECK(r.relative_error <= 1e-10);
  }
}

TEST_CASE("termination tests") {
  const Vector f{2.0};
  CHECK(terminate_iterate_change(f, f, 1e-12));
  CHECK(terminate_iterate_change(Vector{2.5}, f, 0.25));
  CHECK_FALSE(terminate_iterate_change(Vector{2.5}, f, 0.2499));
  CHECK(terminate_iterate_change(Vector{0.0}, Vector{0.0}, 5e-4));
  CHECK(terminate_iterate_change(Vector{1e-4}, Vector{0.0}, 5e-4));
  CHECK_FALSE(terminate_iterate_change(Vector{1e-3}, Vector{0.0}, 5e-4));
  CHECK(terminate_objective_change(5.0, 4.0, 0.25));
  CHECK_FALSE(terminate_objective_change(5.0, 4.0, 0.2));
  CHECK(terminate_objective_change(1e-4, 0.0, 5e-4));
}

TEST_CASE("config validation") {
  SolverConfig config;
  CHECK_NOTHROW(config.validate());
  config.eta = 1.0;
  CHECK_THROWS(config.validate());
  config = SolverConfig{};
  config.sigma = 1.0;
  CHECK_THROWS(config.validate());
  config = SolverConfig{};
  config.alpha_min = 2.0;
  config.alpha_max = 1.0;
  CHECK_THROWS(config.validate());
  config = SolverConfig{};
  config.tol = 0.0;
  CHECK_THROWS(config.validate());
  config = SolverConfig{};
  config.tau = -1.0;
  CHECK_THROWS(config.validate());
}

TEST_CASE("identity model with tau zero is projected gradient") {
  std::mt19937_64 rng(1);
  const std::size_t n = 32;
  const Vector truth = uniform_vector(n, rng, 0.0, 20.0);
  const PoissonSample sample =
      sample_poisson(IdentityMap(n), Signal(truth), sum(truth), 5);
  const PoissonModel model(std::make_shared<IdentityMap>(n), sample.counts);
  SolverConfig config;
  config.tau = 0.0;
  config.tol = 1e-10;
  config.max_iter = 2000;
  config.stop_on_objective_change = false;
  const SolverResult result = run(model, config, Signal(Vector(n, 1.0)));
  const Vector grad = gradient(model, result.estimate);
  // KKT of min F(f) s.t. f >= 0: grad = lambda >= 0 with lambda_i f_i = 0.
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = result.estimate[i];
    const double lambda = std::max(grad[i], 0.0);
    residual += f > 1e-8 ? grad[i] * grad[i] : (grad[i] - lambda) * (grad[i] - lambda);
    CHECK(f >= 0.0);
  }
  CHECK(std::sqrt(residual) <= 1e-6);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(result.estimate[i] == doctest::Approx(sample.counts[i]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("huge tau with canonical l1 drives the estimate to zero") {
  auto t = small_tomography();
  SolverConfig config;
  config.tau = 1e12;
  config.penalty = PenaltyKind::kCanonicalL1;
  const SolverResult result = run(*t.model, config, t.f0);
  // The smoothed log term keeps bins with counts marginally above zero.
  CHECK(max_value(result.estimate.values()) <= 1e-8);
}

TEST_CASE("matvec count per iteration is two plus backtracks") {
  auto t = small_tomography();
  SolverConfig config;
  config.tau = 0.5;
  config.penalty = PenaltyKind::kTotalVariation;
  config.max_iter = 60;
  t.counted->reset();
  const SolverResult result = run(*t.model, config, t.f0);
  std::size_t expected = result.setup_applications;
  for (const TraceRecord& r : result.trace) {
    CHECK(r.forward_applications + r.adjoint_applications == 2 + r.backtracks);
    expected += 2 + r.backtracks;
  }
  CHECK(t.counted->total_count() == expected);
}

TEST_CASE("monotone descent with a zero window") {
  auto t = small_tomography();
  SolverConfig config;
  config.tau = 0.3;
  config.window = 0;
  config.penalty = PenaltyKind::kTotalVariation;
  config.min_iter = 100;
  config.max_iter = 100;
  const SolverResult result = run(*t.model, config, t.f0);
  double previous = result.initial_objective;
  for (const TraceRecord& r : result.trace) {
    CHECK(r.objective <= previous);
    previous = r.objective;
  }
}

TEST_CASE("window maximum is nonincreasing") {
  auto t = small_tomography();
  SolverConfig config;
  config.tau = 0.3;
  config.penalty = PenaltyKind::kWaveletL1;
  config.sub = SubConfig::loose();
  config.max_iter = 120;
  const SolverResult result = run(*t.model, config, t.f0);
  for (std::size_t k = 1; k < result.trace.size(); ++k) {
    CHECK(result.trace[k].window_max <= result.trace[k - 1].window_max);
  }
}

TEST_CASE("trace carries rmse and terminates after the minimum iterations") {
  auto t = small_tomography();
  SolverConfig config;
  config.tau = 0.3;
  config.penalty = PenaltyKind::kTotalVariation;
  const SolverResult result = run(*t.model, config, t.f0, &t.truth);
  CHECK(result.iterations >= config.min_iter);
  CHECK(result.trace.size() == result.iterations);
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    CHECK(result.trace[k].k == k + 1);
    REQUIRE(result.trace[k].rmse.has_value());
    CHECK(*result.trace[k].rmse >= 0.0);
  }
  if (result.reason == TerminationReason::kIterateChange) {
    CHECK(result.trace.back().relative_change <= config.tol);
  }
  // RMSE falls well below its starting value and levels off.
  CHECK(*result.trace.back().rmse < 0.8 * *result.trace.front().rmse);
}

TEST_CASE("alpha overflow accepts with a warning") {
  auto t = small_tomography();
  SolverConfig config;
  config.tau = 0.1;
  config.alpha_min = 1e-8;
  config.alpha_max = 1e-8;
  config.min_iter = 1;
  config.max_iter = 3;
  const SolverResult result = run(*t.model, config, t.f0);
  CHECK_FALSE(result.warnings.empty());
  CHECK(result.trace.front().alpha_overflow);
  for (double v : result.estimate.values()) CHECK(v >= 0.0);
}

TEST_CASE("infeasible start is rejected") {
  auto t = small_tomography();
  Signal bad = t.f0;
  bad[0] = -1.0;
  CHECK_THROWS(run(*t.model, SolverConfig{}, bad));
}

TEST_CASE("kkt residual degenerate and optimal cases") {
  const OrthoBasis basis(WaveletFamily::kHaar, 4);
  CHECK(kkt_residual(Vector(4, 0.0), Vector(4, 0.0), Vector(4, 0.0), basis, 0.5) == 0.0);

  // Solve a tiny dense instance to high accuracy, then check the residual.
  const auto dense = oracles::random_dense_poisson(12, 4, 17);
  const PoissonModel model(std::make_shared<DenseMatrix>(dense.A), dense.y);
  SolverConfig config;
  config.tau = 0.5;
  config.penalty = PenaltyKind::kWaveletL1;
  config.sub = SubConfig::tight();
  config.sub.tol = 1e-14;
  config.sub.max_iter = 1000;
  config.tol = 1e-12;
  config.stop_on_objective_change = false;
  config.max_iter = 5000;
  const SolverResult result = run(model, config, Signal(Vector(4, 1.0)));
  double residual = INFINITY;
  for (auto it = result.trace.rbegin(); it != result.trace.rend(); ++it) {
    if (it->kkt_residual >= 0.0) {
      residual = it->kkt_residual;
      break;
    }
  }
  CHECK(residual <= 1e-6);
}

TEST_CASE("trace csv layout") {
  std::vector<TraceRecord> trace(2);
  trace[0].k = 1;
  trace[0].objective = -3.5;
  trace[0].alpha = 2.0;
  trace[0].backtracks = 1;
  trace[0].elapsed_seconds = 0.25;
  trace[1].k = 2;
  trace[1].rmse = 12.5;
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "k,objective,alpha,backtracks,elapsed_seconds,rmse\n1,-3.5,2,1,0.25,\n2,0,0,0,0,12.5\n");
}

}
