#include "spiral/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "spiral/denoisers.hpp"
#include "spiral/poisson.hpp"
#include "spiral/solver.hpp"
#include "spiral/wavelet.hpp"

namespace spiral::oracles {

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

double max_relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_relative_error: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_error(a[i], b[i]));
  return worst;
}

Vector fd_gradient(const ScalarFunction& F, std::span<const double> f, double h_rel) {
  Vector x(f.begin(), f.end());
  Vector g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = h_rel * std::max(std::abs(f[j]), 1.0);
    x[j] = f[j] + h;
    const double up = F(x);
    x[j] = f[j] - h;
    const double down = F(x);
    x[j] = f[j];
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

Vector dense_apply(const DenseMatrix& A, std::span<const double> x) {
  Vector out(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) acc += A(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace

double DensePoisson::objective(std::span<const double> f) const {
  const Vector Af = dense_apply(A, f);
  double value = 0.0;
  for (std::size_t i = 0; i < Af.size(); ++i) {
    value += Af[i] + b[i];
    if (y[i] > 0.0) value -= y[i] * std::log(Af[i] + b[i] + beta);
  }
  return value;
}

Vector DensePoisson::gradient(std::span<const double> f) const {
  const Vector Af = dense_apply(A, f);
  Vector g(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double w = 1.0 - y[i] / (Af[i] + b[i] + beta);
    for (std::size_t j = 0; j < A.cols(); ++j) g[j] += A(i, j) * w;
  }
  return g;
}

DenseMatrix DensePoisson::hessian(std::span<const double> f) const {
  const Vector Af = dense_apply(A, f);
  const std::size_t n = A.cols();
  DenseMatrix H(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < A.rows(); ++i) {
        const double d = Af[i] + b[i] + beta;
        acc += y[i] * A(i, j) * A(i, k) / (d * d);
      }
      H(j, k) = acc;
    }
  }
  return H;
}

DensePoisson random_dense_poisson(std::size_t m, std::size_t n, std::uint64_t seed, double beta) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DensePoisson p;
  p.A = DenseMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.A(i, j) = unit(rng);
  }
  p.y.resize(m);
  p.b.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    p.y[i] = unit(rng) < 0.2 ? 0.0 : std::floor(12.0 * unit(rng));
    p.b[i] = 0.5 * unit(rng);
  }
  p.beta = beta;
  return p;
}

double quadratic_form(const DenseMatrix& H, std::span<const double> d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < H.rows(); ++j) {
    for (std::size_t k = 0; k < H.cols(); ++k) acc += d[j] * H(j, k) * d[k];
  }
  return acc;
}

double power_iteration(const DenseMatrix& H, std::size_t iters, double tol) {
  const std::size_t n = H.rows();
  Vector v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.01 * static_cast<double>(j % 7);
  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& x : v) x /= norm;
    Vector w = dense_apply(H, v);
    double next = 0.0;
    for (std::size_t j = 0; j < n; ++j) next += v[j] * w[j];
    v = std::move(w);
    if (std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

double classical_bb(std::span<const double> gamma, std::span<const double> delta) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    num += gamma[i] * delta[i];
    den += delta[i] * delta[i];
  }
  return num / den;
}

double classical_bb(std::span<const double> grad_prev, std::span<const double> grad,
                    std::span<const double> f_prev, std::span<const double> f) {
  Vector gamma(grad.size());
  Vector delta(f.size());
  for (std::size_t i = 0; i < grad.size(); ++i) gamma[i] = grad[i] - grad_prev[i];
  for (std::size_t i = 0; i < f.size(); ++i) delta[i] = f[i] - f_prev[i];
  return classical_bb(gamma, delta);
}

namespace {

struct EnumBlock {
  struct Option {
    double cost;
    std::size_t cells;
    std::uint32_t child[4];
    bool merged;
  };
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t width = 0;
  double fit = 0.0;
  std::vector<Option> options;
  std::unique_ptr<EnumBlock> kids[4];
};

std::unique_ptr<EnumBlock> enumerate_block(const Vector& v, std::size_t side, std::size_t row,
                                           std::size_t col, std::size_t width, double kappa) {
  auto block = std::make_unique<EnumBlock>();
  block->row = row;
  block->col = col;
  block->width = width;
  double total = 0.0;
  for (std::size_t r = row; r < row + width; ++r) {
    for (std::size_t c = col; c < col + width; ++c) total += v[r * side + c];
  }
  const double mean = total / static_cast<double>(width * width);
  block->fit = mean > 0.0 ? mean : 0.0;
  double acc = 0.0;
  for (std::size_t r = row; r < row + width; ++r) {
    for (std::size_t c = col; c < col + width; ++c) {
      const double d = v[r * side + c] - block->fit;
      acc += d * d;
    }
  }
  block->options.push_back({0.5 * acc + kappa, 1, {0, 0, 0, 0}, true});
  if (width == 1) return block;

  const std::size_t h = width / 2;
  block->kids[0] = enumerate_block(v, side, row, col, h, kappa);
  block->kids[1] = enumerate_block(v, side, row, col + h, h, kappa);
  block->kids[2] = enumerate_block(v, side, row + h, col, h, kappa);
  block->kids[3] = enumerate_block(v, side, row + h, col + h, h, kappa);
  const auto& o0 = block->kids[0]->options;
  const auto& o1 = block->kids[1]->options;
  const auto& o2 = block->kids[2]->options;
  const auto& o3 = block->kids[3]->options;
  for (std::uint32_t a = 0; a < o0.size(); ++a) {
    for (std::uint32_t b = 0; b < o1.size(); ++b) {
      for (std::uint32_t c = 0; c < o2.size(); ++c) {
        for (std::uint32_t d = 0; d < o3.size(); ++d) {
          const double cost = ((o0[a].cost + o1[b].cost) + o2[c].cost) + o3[d].cost;
          const std::size_t cells = o0[a].cells + o1[b].cells + o2[c].cells + o3[d].cells;
          block->options.push_back({cost, cells, {a, b, c, d}, false});
        }
      }
    }
  }
  return block;
}

void paint(const EnumBlock& block, std::uint32_t option, std::size_t side, Vector& fit) {
  const EnumBlock::Option& o = block.options[option];
  if (o.merged) {
    for (std::size_t r = block.row; r < block.row + block.width; ++r) {
      for (std::size_t c = block.col; c < block.col + block.width; ++c) fit[r * side + c] = block.fit;
    }
    return;
  }
  for (int q = 0; q < 4; ++q) paint(*block.kids[q], o.child[q], side, fit);
}

}  // namespace

RdpEnumeration enumerate_rdp(const Signal& s, double kappa) {
  const Shape shape = s.image_shape();
  if (!shape.square() || !is_power_of_two(shape.rows) || shape.rows > 8) {
    throw std::invalid_argument("enumerate_rdp: expects a square image of side 1, 2, 4 or 8");
  }
  const std::size_t side = shape.rows;
  const auto root = enumerate_block(s.values(), side, 0, 0, side, kappa);
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < root->options.size(); ++i) {
    const auto& o = root->options[i];
    const auto& b = root->options[best];
    if (o.cost < b.cost || (o.cost == b.cost && o.cells < b.cells)) best = i;
  }
  RdpEnumeration out;
  out.cost = root->options[best].cost;
  out.cells = root->options[best].cells;
  out.partitions_examined = root->options.size();
  out.fit.assign(s.size(), 0.0);
  paint(*root, best, side, out.fit);
  return out;
}

DenseMatrix haar_synthesis_matrix(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("haar_synthesis_matrix: n must be 2^k");
  // Columns: the constant, then for each scale the dyadic step functions,
  // coarse to fine, matching the coarse-first coefficient layout.
  DenseMatrix W(n, n);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) W(i, 0) = 1.0 / root_n;
  std::size_t column = 1;
  for (std::size_t count = 1; count < n; count *= 2) {
    const std::size_t support = n / count;
    const double height = 1.0 / std::sqrt(static_cast<double>(support));
    for (std::size_t k = 0; k < count; ++k, ++column) {
      for (std::size_t i = 0; i < support; ++i) {
        W(k * support + i, column) = i < support / 2 ? height : -height;
      }
    }
  }
  return W;
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double tv_value(std::span<const double> f, std::size_t rows, std::size_t cols) {
  double tv = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) tv += std::abs(f[r * cols + c] - f[r * cols + c + 1]);
      if (r + 1 < rows) tv += std::abs(f[r * cols + c] - f[(r + 1) * cols + c]);
    }
  }
  return tv;
}

Vector subgradient(ReferenceProblem problem, const Signal& s, double kappa,
                   std::span<const double> x) {
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] - s[i];
  if (problem != ReferenceProblem::kTotalVariation) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += kappa * sign(x[i]);
    return g;
  }
  const Shape shape = s.image_shape();
  const std::size_t cols = shape.cols;
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      if (c + 1 < cols) {
        const double t = kappa * sign(x[i] - x[i + 1]);
        g[i] += t;
        g[i + 1] -= t;
      }
      if (r + 1 < shape.rows) {
        const double t = kappa * sign(x[i] - x[i + cols]);
        g[i] += t;
        g[i + cols] -= t;
      }
    }
  }
  return g;
}

void project(ReferenceProblem problem, Vector& x, const DenseMatrix* W) {
  if (problem != ReferenceProblem::kBasisL1) {
    for (double& v : x) v = std::max(v, 0.0);
    return;
  }
  // Orthonormal W: the projection onto {W t >= 0} is W^T [W t]_+.
  const std::size_t n = x.size();
  Vector w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i] += (*W)(i, j) * x[j];
    w[i] = std::max(w[i], 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (*W)(i, j) * w[i];
    x[j] = acc;
  }
}

}  // namespace

double reference_objective(ReferenceProblem problem, const Signal& s, double kappa,
                           std::span<const double> x) {
  double fit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) fit += 0.5 * (x[i] - s[i]) * (x[i] - s[i]);
  if (problem == ReferenceProblem::kTotalVariation) {
    const Shape shape = s.image_shape();
    return fit + kappa * tv_value(x, shape.rows, shape.cols);
  }
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return fit + kappa * l1;
}

Vector reference_denoise(ReferenceProblem problem, const Signal& s, double kappa,
                         std::size_t iters, const DenseMatrix* W) {
  if (problem == ReferenceProblem::kBasisL1 &&
      (W == nullptr || W->rows() != s.size() || W->cols() != s.size())) {
    throw std::invalid_argument("reference_denoise: basis problem needs a square W");
  }
  Vector x = s.values();
  project(problem, x, W);
  Vector best = x;
  double best_value = reference_objective(problem, s, kappa, x);
  double level_gap = std::max(0.1 * std::abs(best_value), 1e-12);
  for (std::size_t it = 0; it < iters; ++it) {
    const Vector g = subgradient(problem, s, kappa, x);
    double gg = 0.0;
    for (double v : g) gg += v * v;
    if (gg == 0.0) break;
    const double value = reference_objective(problem, s, kappa, x);
    const double step = (value - (best_value - level_gap)) / gg;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step * g[i];
    project(problem, x, W);
    const double next = reference_objective(problem, s, kappa, x);
    if (next < best_value) {
      best_value = next;
      best = x;
    } else {
      level_gap *= 0.999;
    }
  }
  return best;
}

OracleReport make_report(std::string name, std::string instance, double reference,
                         double candidate, double tolerance) {
  OracleReport r;
  r.name = std::move(name);
  r.instance = std::move(instance);
  r.reference = reference;
  r.candidate = candidate;
  r.relative_error = relative_error(reference, candidate);
  r.tolerance = tolerance;
  r.pass = r.relative_error <= tolerance;
  return r;
}

void write_reports_csv(std::ostream& out, std::span<const OracleReport> reports) {
  out << "name,instance,reference,candidate,relative_error,tolerance,pass\n"
      << std::setprecision(17);
  for (const OracleReport& r : reports) {
    out << r.name << ',' << r.instance << ',' << r.reference << ',' << r.candidate << ','
        << r.relative_error << ',' << r.tolerance << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

namespace {

std::shared_ptr<const DenseMatrix> shared_matrix(const DenseMatrix& A) {
  return std::make_shared<const DenseMatrix>(A.rows(), A.cols(), A.entries());
}

PoissonModel as_model(const DensePoisson& p) {
  return PoissonModel(shared_matrix(p.A), p.y, p.beta, p.b);
}

Vector random_positive(std::size_t n, std::mt19937_64& rng, double lo = 0.1, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector f(n);
  for (double& v : f) v = dist(rng);
  return f;
}

std::string tag(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

std::vector<OracleReport> gradient_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(101);
  for (std::size_t t = 0; t < 20; ++t) {
    const std::size_t n = 4 + t % 29;
    const DensePoisson p = random_dense_poisson(n + 3, n, 1000 + t);
    const PoissonModel model = as_model(p);
    const Vector f = random_positive(n, rng);
    const Vector fd = fd_gradient([&](std::span<const double> x) { return p.objective(x); }, f, 1e-5);
    const Vector g = gradient(model, Signal(f));
    OracleReport r = make_report("gradient", tag("n", n) + "_seed" + std::to_string(1000 + t), 0.0,
                                 0.0, 1e-5);
    r.relative_error = max_relative_error(fd, g);
    r.reference = fd[0];
    r.candidate = g[0];
    r.pass = r.relative_error <= r.tolerance;
    out.push_back(r);
  }
  return out;
}

std::vector<OracleReport> curvature_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(202);
  std::normal_distribution<double> normal;
  for (std::size_t t = 0; t < 20; ++t) {
    const std::size_t n = 3 + t % 30;
    const DensePoisson p = random_dense_poisson(n + 5, n, 2000 + t);
    const PoissonModel model = as_model(p);
    const Vector f = random_positive(n, rng);
    Vector d(n);
    for (double& v : d) v = normal(rng);
    const double reference = quadratic_form(p.hessian(f), d);
    Vector Af = dense_apply(p.A, f);
    const double candidate = curvature_form(model, Af, dense_apply(p.A, d));
    out.push_back(make_report("curvature", tag("n", n), reference, candidate, 1e-10));
  }
  return out;
}

std::vector<OracleReport> lipschitz_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(303);
  const DensePoisson p = random_dense_poisson(12, 8, 3030, 0.1);
  const PoissonModel model = as_model(p);
  const double bound = lipschitz_bound(model);
  for (std::size_t t = 0; t < 50; ++t) {
    // Includes points near the boundary where the curvature peaks.
    const Vector f = random_positive(8, rng, 0.0, t % 2 == 0 ? 0.01 : 3.0);
    const double lambda = power_iteration(p.hessian(f));
    OracleReport r = make_report("lipschitz", tag("f", t), bound, lambda, 0.0);
    r.pass = lambda <= bound;
    out.push_back(r);
  }
  return out;
}

std::vector<OracleReport> l1_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(-1.0, 2.0);
  for (std::size_t t = 0; t < 10; ++t) {
    Vector s(12);
    for (double& v : s) v = unit(rng);
    const double kappa = t == 0 ? 0.0 : 0.1 * static_cast<double>(t);
    const Signal sig(s);
    const Vector ref = reference_denoise(ReferenceProblem::kCanonicalL1, sig, kappa);
    const Signal closed = denoise_canonical_l1(sig, kappa);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(ref[i] - closed[i]));
    OracleReport r = make_report("l1-canonical", "kappa" + std::to_string(kappa), 0.0, worst,
                                 kappa == 0.0 ? 1e-6 : 1e-5);
    r.relative_error = worst;
    r.pass = worst <= r.tolerance;
    out.push_back(r);
  }
  return out;
}

std::vector<OracleReport> l1_dual_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  const std::size_t n = 16;
  const DenseMatrix W = haar_synthesis_matrix(n);
  const OrthoBasis basis(WaveletFamily::kHaar, n);
  for (std::size_t t = 0; t < 50; ++t) {
    Vector x(n);
    for (double& v : x) v = unit(rng) + noise(rng);
    const double kappa = 0.01 + 0.99 * unit(rng);
    const Vector s = basis.analysis(x);
    const L1DualResult dual = denoise_l1_dual(s, kappa, basis, {});
    const Vector ref = reference_denoise(ReferenceProblem::kBasisL1, Signal(s), kappa, 100000, &W);
    const double reference = reference_objective(ReferenceProblem::kBasisL1, Signal(s), kappa, ref);
    out.push_back(make_report("l1-dual", tag("instance", t), reference, dual.primal, 1e-6));
  }
  return out;
}

std::vector<OracleReport> tv_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> unit(-0.5, 1.5);
  const double kappas[] = {0.01, 0.1, 1.0};
  for (std::size_t t = 0; t < 20; ++t) {
    Vector s(64);
    for (double& v : s) v = unit(rng);
    const Signal sig(s, Shape{8, 8});
    const double kappa = kappas[t % 3];
    TvOptions options;
    options.tol = 1e-12;
    options.max_iter = 20000;
    const TvResult tv = denoise_tv(sig, kappa, options);
    const Vector ref = reference_denoise(ReferenceProblem::kTotalVariation, sig, kappa);
    const double reference = reference_objective(ReferenceProblem::kTotalVariation, sig, kappa, ref);
    const double candidate = reference_objective(ReferenceProblem::kTotalVariation, sig, kappa,
                                                 tv.f.values());
    out.push_back(make_report("tv", tag("instance", t) + "_kappa" + std::to_string(kappa),
                              reference, candidate, 1e-4));
  }
  return out;
}

std::vector<OracleReport> rdp_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> unit(-0.5, 1.5);
  std::uniform_real_distribution<double> kdist(0.0, 0.5);
  for (std::size_t t = 0; t < 220; ++t) {
    const std::size_t side = t < 200 ? 4 : 8;
    Vector s(side * side);
    for (double& v : s) v = unit(rng);
    const Signal sig(s, Shape{side, side});
    const double kappa = kdist(rng);
    const RdpEnumeration ref = enumerate_rdp(sig, kappa);
    const RdpResult dp = rdp_fit(sig, kappa);
    OracleReport r = make_report("rdp", tag("side", side) + "_" + std::to_string(t), ref.cost,
                                 dp.cost, 0.0);
    r.pass = ref.cost == dp.cost && ref.fit == dp.f.values();
    out.push_back(r);
  }
  return out;
}

std::vector<OracleReport> bb_suite() {
  std::vector<OracleReport> out;
  std::mt19937_64 rng(808);
  std::normal_distribution<double> normal;
  for (std::size_t t = 0; t < 10; ++t) {
    const std::size_t n = 6;
    const DensePoisson p = random_dense_poisson(9, n, 8000 + t);
    const PoissonModel model = as_model(p);
    const Vector f = random_positive(n, rng);
    Vector d(n);
    for (double& v : d) v = 0.1 * normal(rng);
    // Quadratic with the Poisson Hessian at f: gradient difference = H d.
    const DenseMatrix H = p.hessian(f);
    const Vector gamma = dense_apply(H, d);
    const double classical = classical_bb(gamma, d);
    const Vector Af = dense_apply(p.A, f);
    const double modified = bb_alpha_init(model, Af, d, dense_apply(p.A, d), 1e-30, 1e30);
    out.push_back(make_report("bb-quadratic", tag("instance", t), classical, modified, 1e-10));

    // Poisson objective away from the optimum: diagnostic only.
    Vector f_next(n);
    for (std::size_t j = 0; j < n; ++j) f_next[j] = std::max(f[j] + 5.0 * d[j], 0.01);
    const double poisson_classical = classical_bb(p.gradient(f), p.gradient(f_next), f, f_next);
    Vector delta(n);
    for (std::size_t j = 0; j < n; ++j) delta[j] = f_next[j] - f[j];
    const Vector Af_next = dense_apply(p.A, f_next);
    Vector A_delta(Af.size());
    for (std::size_t i = 0; i < Af.size(); ++i) A_delta[i] = Af_next[i] - Af[i];
    const double poisson_modified = bb_alpha_init(model, Af_next, delta, A_delta, 1e-30, 1e30);
    OracleReport r = make_report("bb-poisson-diagnostic", tag("instance", t), poisson_classical,
                                 poisson_modified, 0.0);
    r.pass = true;
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"gradient", "curvature", "lipschitz", "l1", "l1-dual", "tv", "rdp", "bb", "all"};
}

std::vector<OracleReport> run_suite(std::string_view name) {
  if (name == "gradient") return gradient_suite();
  if (name == "curvature") return curvature_suite();
  if (name == "lipschitz") return lipschitz_suite();
  if (name == "l1") return l1_suite();
  if (name == "l1-dual") return l1_dual_suite();
  if (name == "tv") return tv_suite();
  if (name == "rdp") return rdp_suite();
  if (name == "bb") return bb_suite();
  if (name == "all") {
    std::vector<OracleReport> all;
    for (const std::string& suite : suite_names()) {
      if (suite == "all") continue;
      auto part = run_suite(suite);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown oracle suite '" + std::string(name) + "'");
}

}  // namespace spiral::oracles
