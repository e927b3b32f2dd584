#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "spiral/difference.hpp"
#include "spiral/linear_map.hpp"
#include "spiral/oracles.hpp"
#include "spiral/phantom.hpp"
#include "spiral/tomography.hpp"
#include "spiral/wavelet.hpp"
#include "support.hpp"

using namespace spiral;
using spiral::test::normal_vector;
using spiral::test::uniform_vector;

namespace {

double adjoint_gap(const LinearMap& map, std::mt19937_64& rng) {
  const Vector x = normal_vector(map.cols(), rng);
  const Vector y = normal_vector(map.rows(), rng);
  const Vector Ax = map.forward(x);
  const Vector ATy = map.adjoint(y);
  return std::abs(dot(Ax, y) - dot(x, ATy)) / (norm2(Ax) * norm2(y) + 1.0);
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("identity map returns its input") {
  IdentityMap id(3);
  CHECK(id.forward(Vector{1, 2, 3}) == Vector{1, 2, 3});
  CHECK(id.adjoint(Vector{1, 2, 3}) == Vector{1, 2, 3});
}

TEST_CASE("dense matrix hand arithmetic") {
  DenseMatrix A(2, 2, {1, 2, 3, 4});
  CHECK(A.forward(Vector{1, 1}) == Vector{3, 7});
  CHECK(A.adjoint(Vector{1, 1}) == Vector{4, 6});
}

TEST_CASE("dimension mismatch throws") {
  DenseMatrix A(2, 3);
  CHECK_THROWS_AS(A.forward(Vector{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(A.adjoint(Vector{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("apply leaves its input untouched") {
  DenseMatrix A(2, 2, {1, 2, 3, 4});
  const Vector x{0.5, -1.0};
  const Vector copy = x;
  (void)A.forward(x);
  CHECK(x == copy);
}

TEST_CASE("horizontal differences of [[0,1],[0,1]]") {
  DifferenceOperator D1(Shape{2, 2}, DifferenceDirection::kHorizontal);
  CHECK(D1.forward(Vector{0, 1, 0, 1}) == Vector{-1, -1});
  DifferenceOperator D2(Shape{2, 2}, DifferenceDirection::kVertical);
  CHECK(D2.forward(Vector{0, 1, 0, 1}) == Vector{0, 0});
}

TEST_CASE("difference of a constant image is zero") {
  StackedDifferenceOperator D(Shape{5, 4});
  const Vector out = D.forward(Vector(20, 3.25));
  for (double v : out) CHECK(v == 0.0);
  CHECK(D.rows() == 5 * 3 + 4 * 4);
}

TEST_CASE("adjoint consistency of every map") {
  std::mt19937_64 rng(7);
  DenseMatrix dense(7, 5, uniform_vector(35, rng));
  const Phantom p = make_phantom(16);
  const TomographyModel tomo = build_tomography(16, 16, 12, 135.0, 16, p.attenuation);
  WaveletSynthesisMap haar(OrthoBasis(WaveletFamily::kHaar, Shape{16, 16}));
  WaveletSynthesisMap db6(OrthoBasis(WaveletFamily::kDaubechies6, 32));
  StackedDifferenceOperator diff(Shape{8, 8});
  const LinearMap* maps[] = {&dense, tomo.projector.get(), tomo.system.get(), &haar, &db6, &diff};
  for (const LinearMap* map : maps) {
    for (int i = 0; i < 20; ++i) CHECK(adjoint_gap(*map, rng) <= 1e-10);
  }
}

TEST_CASE("zero attenuation leaves the projector unchanged") {
  const Signal mu = Signal::zeros(Shape{8, 8});
  const TomographyModel tomo = build_tomography(8, 8, 6, 135.0, 8, mu);
  for (double w : tomo.attenuation_weights) CHECK(w == 1.0);
  std::mt19937_64 rng(3);
  const Vector f = uniform_vector(64, rng);
  CHECK(tomo.system->forward(f) == tomo.projector->forward(f));
}

TEST_CASE("attenuation weights lie in (0, 1]") {
  const Phantom p = make_phantom(16);
  const TomographyModel tomo = build_tomography(16, 16, 10, 135.0, 16, p.attenuation);
  for (double w : tomo.attenuation_weights) {
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
  }
}

TEST_CASE("single angle with pixel-width strips gives column sums") {
  const std::size_t n = 8;
  const TomographyModel tomo = build_tomography(n, n, 1, 135.0, n, Signal::zeros(Shape{n, n}));
  std::mt19937_64 rng(11);
  const Vector f = uniform_vector(n * n, rng);
  DenseMatrix column_sums(n, n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) column_sums(c, r * n + c) = 1.0;
  }
  const Vector expected = column_sums.forward(f);
  const Vector got = tomo.system->forward(f);
  REQUIRE(got.size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("strip areas of a pixel sum to one across a tiling of strips") {
  for (double angle : {0.0, 0.3, 0.7853981633974483, 1.2, 2.0}) {
    const double a = std::abs(std::cos(angle));
    const double b = std::abs(std::sin(angle));
    double total = 0.0;
    for (int i = -4; i < 4; ++i) total += pixel_strip_overlap(0.37, i - 0.5, i + 0.5, a, b);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("tomography forward of a nonnegative image is nonnegative") {
  const Phantom p = make_phantom(16);
  const TomographyModel tomo = build_tomography(16, 16, 15, 135.0, 16, p.attenuation);
  for (double v : tomo.system->forward(p.emission.values())) CHECK(v >= 0.0);
  const DenseMatrix dense = to_dense(*tomo.system);
  for (double v : dense.entries()) CHECK(v >= 0.0);
}

TEST_CASE("tomography rejects bad inputs") {
  CHECK_THROWS(build_tomography(8, 4, 4, 135.0, 8, Signal::zeros(Shape{8, 4})));
  Signal mu = Signal::zeros(Shape{4, 4});
  mu[3] = -0.1;
  CHECK_THROWS(build_tomography(4, 4, 4, 135.0, 4, mu));
}

TEST_CASE("tomography is deterministic") {
  const Phantom p = make_phantom(16);
  const auto a = build_tomography(16, 16, 9, 135.0, 16, p.attenuation);
  const auto b = build_tomography(16, 16, 9, 135.0, 16, p.attenuation);
  CHECK(to_dense(*a.system).entries() == to_dense(*b.system).entries());
}

TEST_CASE("dense materialization refuses huge maps") {
  IdentityMap big(1u << 12);
  CHECK_THROWS_AS(to_dense(big), std::length_error);
}

TEST_CASE("Haar analysis of a constant vector") {
  const OrthoBasis haar(WaveletFamily::kHaar, 16);
  const Vector theta = haar.analysis(Vector(16, 2.5));
  CHECK(theta[0] == doctest::Approx(2.5 * 4.0));
  for (std::size_t i = 1; i < theta.size(); ++i) CHECK(std::abs(theta[i]) <= 1e-14);
}

TEST_CASE("wavelet round trip and isometry") {
  std::mt19937_64 rng(5);
  for (WaveletFamily family : {WaveletFamily::kHaar, WaveletFamily::kDaubechies4,
                               WaveletFamily::kDaubechies6, WaveletFamily::kDaubechies8}) {
    for (const OrthoBasis& basis : {OrthoBasis(family, 64), OrthoBasis(family, Shape{16, 32}),
                                    OrthoBasis(family, Shape{16, 16}, 2)}) {
      const Vector f = normal_vector(basis.size(), rng);
      const Vector theta = basis.analysis(f);
      const Vector back = basis.synthesis(theta);
      CHECK(norm2(difference(back, f)) <= 1e-10 * norm2(f));
      CHECK(norm2(theta) == doctest::Approx(norm2(f)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Daubechies filters are orthonormal") {
  for (WaveletFamily family : {WaveletFamily::kHaar, WaveletFamily::kDaubechies4,
                               WaveletFamily::kDaubechies6, WaveletFamily::kDaubechies8}) {
    const auto h = scaling_filter(family);
    CHECK(sum(h) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    for (std::size_t shift = 0; shift < h.size(); shift += 2) {
      double acc = 0.0;
      for (std::size_t k = 0; k + shift < h.size(); ++k) acc += h[k] * h[k + shift];
      CHECK(acc == doctest::Approx(shift == 0 ? 1.0 : 0.0).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("Haar synthesis matrix agrees with the oracle construction") {
  const DenseMatrix ours = to_dense(WaveletSynthesisMap(OrthoBasis(WaveletFamily::kHaar, 16)));
  const DenseMatrix oracle = oracles::haar_synthesis_matrix(16);
  for (std::size_t i = 0; i < ours.entries().size(); ++i) {
    CHECK(ours.entries()[i] == doctest::Approx(oracle.entries()[i]).epsilon(1e-14).scale(1.0));
  }
}

TEST_CASE("wavelet rejects non-dyadic lengths") {
  CHECK_THROWS(OrthoBasis(WaveletFamily::kHaar, 12));
  CHECK_THROWS(OrthoBasis(WaveletFamily::kDaubechies6, Shape{8, 6}));
  CHECK_THROWS(parse_wavelet_family("db3"));
  CHECK(parse_wavelet_family("db6") == WaveletFamily::kDaubechies6);
}

TEST_CASE("counting map counts applications") {
  auto inner = std::make_shared<IdentityMap>(4);
  CountingMap counted(inner);
  (void)counted.forward(Vector(4, 1.0));
  (void)counted.forward(Vector(4, 1.0));
  (void)counted.adjoint(Vector(4, 1.0));
  CHECK(counted.forward_count() == 2);
  CHECK(counted.adjoint_count() == 1);
  counted.reset();
  CHECK(counted.total_count() == 0);
}

}
