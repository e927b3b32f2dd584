#include <cmath>
#include <sstream>

#include "doctest.h"
#include "spiral/oracles.hpp"

using namespace spiral;
using namespace spiral::oracles;

TEST_SUITE("oracles") {

TEST_CASE("relative error definition") {
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(2.0, 1.0) == 0.5);
  CHECK(relative_error(0.0, 0.0) == 0.0);
  CHECK(relative_error(0.0, 1e-40) == doctest::Approx(1e-10));
}

TEST_CASE("finite differences on a quadratic") {
  const Vector f{0.5, -1.5, 2.0, 3.25};
  const auto F = [](std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += 0.5 * v * v;
    return acc;
  };
  const Vector g = fd_gradient(F, f);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == doctest::Approx(f[i]).epsilon(1e-9));
}

TEST_CASE("finite differences converge at second order") {
  const auto F = [](std::span<const double> x) { return std::exp(x[0]) + std::sin(x[1]); };
  const Vector f{0.3, 0.7};
  const double exact = std::exp(0.3);
  const double e1 = std::abs(fd_gradient(F, f, 1e-2)[0] - exact);
  const double e2 = std::abs(fd_gradient(F, f, 5e-3)[0] - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("enumeration trivial cases") {
  const auto one = enumerate_rdp(Signal(Vector{-0.5}, Shape{1, 1}), 0.2);
  CHECK(one.cost == 0.5 * 0.25 + 0.2);
  CHECK(one.cells == 1);

  const Vector s{1, -2, 3, 0.5, -1, 2, 0, 4, 1, 1, -3, 2, 0.25, 0.5, 1, -1};
  const auto zero = enumerate_rdp(Signal(s, Shape{4, 4}), 0.0);
  double expected = 0.0;
  for (double v : s) {
    if (v < 0.0) expected += 0.5 * v * v;
  }
  CHECK(zero.cost == doctest::Approx(expected));
  CHECK(zero.partitions_examined == 17);
  CHECK(enumerate_rdp(Signal(Vector(64, 1.0), Shape{8, 8}), 0.1).partitions_examined == 83522);
}

TEST_CASE("reference denoiser limits") {
  const Signal s(Vector{1.5, -0.3, 0.2, -2.0});
  const Vector proj = reference_denoise(ReferenceProblem::kCanonicalL1, s, 0.0, 1000);
  const Vector expected{1.5, 0.0, 0.2, 0.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(proj[i] - expected[i]) <= 1e-6);
  const Vector l1 = reference_denoise(ReferenceProblem::kCanonicalL1, s, 0.5);
  const Vector closed{1.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(l1[i] - closed[i]) <= 1e-5);
  const Signal img(Vector{1.0, -1.0, 0.5, 2.0}, Shape{2, 2});
  const Vector tv0 = reference_denoise(ReferenceProblem::kTotalVariation, img, 0.0, 1000);
  const Vector tv_expected{1.0, 0.0, 0.5, 2.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(tv0[i] - tv_expected[i]) <= 1e-6);
  CHECK_THROWS(reference_denoise(ReferenceProblem::kBasisL1, s, 0.1));
}

TEST_CASE("classical BB ratio") {
  const Vector d{1.0, -2.0, 0.5};
  CHECK(classical_bb(d, d) == 1.0);
  CHECK(classical_bb(Vector{0, 0}, Vector{1, 1}, Vector{0, 0}, Vector{0.5, 0.5}) == 2.0);
}

TEST_CASE("power iteration on a diagonal matrix") {
  DenseMatrix H(3, 3, {2, 0, 0, 0, 5, 0, 0, 0, 1});
  CHECK(power_iteration(H) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("fast suites pass and report csv") {
  for (const char* suite : {"gradient", "curvature", "lipschitz", "l1", "bb"}) {
    for (const OracleReport& r : run_suite(suite)) CHECK_MESSAGE(r.pass, r.name << " " << r.instance);
  }
  std::ostringstream out;
  const std::vector<OracleReport> reports{make_report("x", "y", 1.0, 1.0, 0.0)};
  write_reports_csv(out, reports);
  CHECK(out.str() == "name,instance,reference,candidate,relative_error,tolerance,pass\nx,y,1,1,0,0,pass\n");
  CHECK_THROWS(run_suite("nope"));
}

}
