#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spiral/linear_map.hpp"
#include "spiral/signal.hpp"

// Brute-force references. Nothing here calls into the code paths it checks:
// objectives, transforms and partitions are recomputed from their
// definitions.
namespace spiral::oracles {

// |a - b| / max(|a|, |b|, 1e-30)
double relative_error(double a, double b);
double max_relative_error(std::span<const double> a, std::span<const double> b);

using ScalarFunction = std::function<double(std::span<const double>)>;

// Central differences with step h_rel * max(|f_j|, 1).
Vector fd_gradient(const ScalarFunction& F, std::span<const double> f, double h_rel = 1e-6);

// Dense Poisson instance: F(f) = sum(Af + b) - sum_{y>0} y log(Af + b + beta).
struct DensePoisson {
  DenseMatrix A{0, 0};
  Vector y;
  Vector b;
  double beta = 1e-10;

  double objective(std::span<const double> f) const;
  Vector gradient(std::span<const double> f) const;
  // H = A^T diag(y / (Af + b + beta)^2) A, assembled entrywise.
  DenseMatrix hessian(std::span<const double> f) const;
};

DensePoisson random_dense_poisson(std::size_t m, std::size_t n, std::uint64_t seed,
                                  double beta = 1e-10);

// d^T H d
double quadratic_form(const DenseMatrix& H, std::span<const double> d);

// Largest eigenvalue of a symmetric positive semidefinite matrix.
double power_iteration(const DenseMatrix& H, std::size_t iters = 2000, double tol = 1e-14);

// Classical ratio gamma^T delta / ||delta||^2.
double classical_bb(std::span<const double> gamma, std::span<const double> delta);
double classical_bb(std::span<const double> grad_prev, std::span<const double> grad,
                    std::span<const double> f_prev, std::span<const double> f);

struct RdpEnumeration {
  double cost = 0.0;
  std::size_t cells = 0;
  Vector fit;
  std::size_t partitions_examined = 0;
};

// Evaluates every recursive dyadic partition of a square power-of-two image
// (up to 8x8). Ties keep the partition with fewer cells, then the one
// enumerated first (merge before split).
RdpEnumeration enumerate_rdp(const Signal& s, double kappa);

// Orthonormal full-depth Haar synthesis matrix built column by column.
DenseMatrix haar_synthesis_matrix(std::size_t n);

enum class ReferenceProblem {
  kCanonicalL1,  // 1/2||f - s||^2 + kappa ||f||_1, f >= 0
  kBasisL1,      // 1/2||t - s||^2 + kappa ||t||_1, W t >= 0
  kTotalVariation,  // 1/2||f - s||^2 + kappa TV(f), f >= 0
};

double reference_objective(ReferenceProblem problem, const Signal& s, double kappa,
                           std::span<const double> x);

// Projected subgradient with Polyak steps toward an adaptive target level;
// returns the best feasible point seen. `W` is required for kBasisL1.
Vector reference_denoise(ReferenceProblem problem, const Signal& s, double kappa,
                         std::size_t iters = 100000, const DenseMatrix* W = nullptr);

struct OracleReport {
  std::string name;
  std::string instance;
  double reference = 0.0;
  double candidate = 0.0;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

OracleReport make_report(std::string name, std::string instance, double reference,
                         double candidate, double tolerance);

// name,instance,reference,candidate,relative_error,tolerance,pass
void write_reports_csv(std::ostream& out, std::span<const OracleReport> reports);

std::vector<std::string> suite_names();
// Throws std::invalid_argument for an unknown suite; "all" runs every suite.
std::vector<OracleReport> run_suite(std::string_view name);

}  // namespace spiral::oracles
