#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "spiral/linear_map.hpp"
#include "spiral/oracles.hpp"
#include "spiral/poisson.hpp"
#include "support.hpp"

using namespace spiral;
using spiral::test::normal_vector;
using spiral::test::uniform_vector;

namespace {

std::shared_ptr<const LinearMap> identity(std::size_t n) { return std::make_shared<IdentityMap>(n); }

PoissonModel random_model(std::size_t m, std::size_t n, std::uint64_t seed, double beta = 1e-10,
                          bool background = false) {
  const auto dense = oracles::random_dense_poisson(m, n, seed, beta);
  return PoissonModel(std::make_shared<DenseMatrix>(dense.A), dense.y, beta,
                      background ? dense.b : Vector{});
}

}  // namespace

TEST_SUITE("poisson_likelihood") {

TEST_CASE("zero counts at zero give zero objective") {
  const PoissonModel model(identity(3), Vector(3, 0.0));
  CHECK(objective(model, Signal::zeros(3)) == 0.0);
}

TEST_CASE("scalar objective by substitution") {
  const PoissonModel model(identity(1), Vector{2.0}, 1e-10);
  CHECK(objective(model, Signal(Vector{1.0})) == 1.0 - 2.0 * std::log(1.0 + 1e-10));
}

TEST_CASE("objective matches the scalar-loop oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto dense = oracles::random_dense_poisson(8, 16, seed);
    const PoissonModel model(std::make_shared<DenseMatrix>(dense.A), dense.y, dense.beta, dense.b);
    std::mt19937_64 rng(seed);
    const Vector f = uniform_vector(16, rng);
    CHECK(oracles::relative_error(dense.objective(f), objective(model, Signal(f))) <= 1e-12);
  }
}

TEST_CASE("infeasible queries throw") {
  const PoissonModel model(identity(2), Vector{1.0, 1.0});
  CHECK_THROWS_AS(objective(model, Signal(Vector{1.0, -0.5})), std::domain_error);
  CHECK_THROWS_AS(gradient(model, Signal(Vector{-1.0, 0.5})), std::domain_error);
}

TEST_CASE("model validation") {
  CHECK_THROWS(PoissonModel(identity(2), Vector{1.5, 1.0}));
  CHECK_THROWS(PoissonModel(identity(2), Vector{-1.0, 1.0}));
  CHECK_THROWS(PoissonModel(identity(2), Vector{1.0, 1.0}, 0.0));
  CHECK_THROWS(PoissonModel(identity(2), Vector{1.0}));
  CHECK_THROWS(PoissonModel(identity(2), Vector{1.0, 1.0}, 1e-10, Vector{-1.0, 0.0}));
}

TEST_CASE("zero counts give gradient A^T 1 exactly") {
  std::mt19937_64 rng(2);
  auto A = std::make_shared<DenseMatrix>(5, 3, uniform_vector(15, rng));
  const PoissonModel model(A, Vector(5, 0.0));
  CHECK(gradient(model, Signal(uniform_vector(3, rng))) == A->adjoint(Vector(5, 1.0)));
}

TEST_CASE("identity gradient is about beta") {
  const double beta = 1e-6;
  const PoissonModel model(identity(1), Vector{1.0}, beta);
  const Vector g = gradient(model, Signal(Vector{1.0}));
  CHECK(g[0] == doctest::Approx(1.0 - 1.0 / (1.0 + beta)).epsilon(1e-12));
  CHECK(g[0] == doctest::Approx(beta).epsilon(1e-5));
}

TEST_CASE("gradient uses one adjoint") {
  std::mt19937_64 rng(4);
  auto A = std::make_shared<DenseMatrix>(6, 4, uniform_vector(24, rng));
  auto counted = std::make_shared<CountingMap>(A);
  const PoissonModel model(counted, Vector{1, 2, 0, 3, 1, 4});
  const Signal f(uniform_vector(4, rng));
  const Vector Af = A->forward(f.values());
  (void)gradient(model, f, Af);
  CHECK(counted->adjoint_count() == 1);
  CHECK(counted->forward_count() == 0);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto dense = oracles::random_dense_poisson(12, 9, seed);
    const PoissonModel model(std::make_shared<DenseMatrix>(dense.A), dense.y, dense.beta, dense.b);
    const Vector f = uniform_vector(9, rng, 0.1, 2.0);
    const Vector fd = oracles::fd_gradient(
        [&](std::span<const double> x) { return objective(model, Signal(Vector(x.begin(), x.end()))); },
        f, 1e-5);
    CHECK(oracles::max_relative_error(fd, gradient(model, Signal(f))) <= 1e-5);
  }
}

TEST_CASE("curvature form edge cases") {
  const PoissonModel none(identity(3), Vector(3, 0.0));
  CHECK(curvature_form(none, Vector{1, 2, 3}, Vector{0.5, -1, 2}) == 0.0);
  const PoissonModel model(identity(3), Vector{1, 2, 3});
  CHECK(curvature_form(model, Vector{1, 2, 3}, Vector(3, 0.0)) == 0.0);
}

TEST_CASE("curvature form equals the dense Hessian quadratic form") {
  std::mt19937_64 rng(13);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto dense = oracles::random_dense_poisson(10, 7, seed);
    const PoissonModel model(std::make_shared<DenseMatrix>(dense.A), dense.y, dense.beta, dense.b);
    const Vector f = uniform_vector(7, rng);
    const Vector d = normal_vector(7, rng);
    const double reference = oracles::quadratic_form(dense.hessian(f), d);
    const double got = curvature_form(model, dense.A.forward(f), dense.A.forward(d));
    CHECK(oracles::relative_error(reference, got) <= 1e-10);
    CHECK(got >= 0.0);
  }
}

TEST_CASE("Lipschitz bound by formula") {
  const PoissonModel model(identity(3), Vector{1, 3, 2}, 0.5);
  CHECK(lipschitz_bound(model) == 12.0);
  const PoissonModel zero(identity(3), Vector(3, 0.0), 0.5);
  CHECK(lipschitz_bound(zero) == 0.0);
}

TEST_CASE("power estimate of the Hessian at zero stays below the bound") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PoissonModel model = random_model(9, 6, seed, 0.1, true);
    const Signal zero = Signal::zeros(6);
    const double estimate = hessian_power_estimate(model, zero);
    CHECK(estimate <= lipschitz_bound(model));
    const auto dense = oracles::random_dense_poisson(9, 6, seed, 0.1);
    CHECK(oracles::relative_error(oracles::power_iteration(dense.hessian(zero.values())), estimate) <=
          1e-6);
  }
}

TEST_CASE("objective is midpoint convex") {
  std::mt19937_64 rng(21);
  const PoissonModel model = random_model(10, 6, 77);
  for (int t = 0; t < 50; ++t) {
    const Vector f1 = uniform_vector(6, rng, 0.0, 3.0);
    const Vector f2 = uniform_vector(6, rng, 0.0, 3.0);
    Vector mid(6);
    for (int j = 0; j < 6; ++j) mid[j] = 0.5 * (f1[j] + f2[j]);
    CHECK(objective(model, Signal(mid)) <=
          0.5 * (objective(model, Signal(f1)) + objective(model, Signal(f2))) + 1e-10);
  }
}

TEST_CASE("background enters the linear and log terms") {
  const PoissonModel model(identity(1), Vector{2.0}, 1e-10, Vector{0.5});
  CHECK(objective(model, Signal(Vector{1.0})) ==
        doctest::Approx(1.5 - 2.0 * std::log(1.5 + 1e-10)).epsilon(1e-15));
}

}
