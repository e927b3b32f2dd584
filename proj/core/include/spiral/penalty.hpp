#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "spiral/denoisers.hpp"
#include "spiral/signal.hpp"
#include "spiral/wavelet.hpp"

namespace spiral {

enum class PenaltyKind {
  kCanonicalL1,              // ||f||_1
  kWaveletL1,                // ||W^T f||_1
  kTotalVariation,           // anisotropic TV
  kRdp,                      // kappa |P| over recursive dyadic partitions
  kRdpTranslationInvariant,  // cycle-spun RDP
};

// CLI names: l1, l1w, tv, rdp, rdp-ti.
PenaltyKind parse_penalty_kind(std::string_view name);
std::string to_string(PenaltyKind kind);

// Inner-solver settings for the iterative subproblems (l1w, tv).
struct SubConfig {
  double tol = 1e-6;
  std::size_t min_iter = 0;
  std::size_t max_iter = 200;
  bool warm_start = true;
  WaveletFamily wavelet = WaveletFamily::kHaar;
  std::size_t wavelet_levels = 0;  // 0 = full decomposition
  std::size_t ti_shift_extent = 8;
  bool ti_full_shifts = false;

  // tol 1e-8, 10 to 100 inner iterations.
  static SubConfig tight();
  // tol 1e-4, at most 10 inner iterations.
  static SubConfig loose();
};

struct SubproblemSolution {
  Signal f;
  // pen(f) as used in the objective; for RDP penalties the cell count of the
  // chosen partition (mean over shifts for the cycle-spun variant).
  double penalty = 0.0;
  std::size_t inner_iterations = 0;
};

// Solves min 1/2 ||f - s||^2 + kappa pen(f) s.t. f >= 0. Instances may carry
// warm-start state between calls and are not thread-safe.
class SubproblemSolver {
 public:
  virtual ~SubproblemSolver() = default;

  virtual PenaltyKind kind() const = 0;
  virtual SubproblemSolution solve(const Signal& s, double kappa) = 0;
  // pen(f) for a feasible f that did not come from solve().
  virtual double penalty(const Signal& f) const = 0;
  // Accepts the most recent solve() result as the new iterate; warm starts
  // are taken from accepted solutions only.
  virtual void accept() {}
  virtual void reset() {}
};

// `shape` is required for image penalties (tv, rdp, rdp-ti, and 2D wavelets).
std::unique_ptr<SubproblemSolver> make_subproblem_solver(PenaltyKind kind, const SubConfig& config,
                                                         std::size_t n,
                                                         std::optional<Shape> shape);

class WaveletL1Solver final : public SubproblemSolver {
 public:
  WaveletL1Solver(OrthoBasis basis, const SubConfig& config);

  PenaltyKind kind() const override { return PenaltyKind::kWaveletL1; }
  SubproblemSolution solve(const Signal& s, double kappa) override;
  double penalty(const Signal& f) const override;
  void accept() override;
  void reset() override;

  const OrthoBasis& basis() const { return basis_; }
  // Coefficients and multiplier of the last accepted solution.
  const Vector& theta() const { return accepted_theta_; }
  const Vector& lambda() const { return accepted_lambda_; }
  double last_gap() const { return last_.gap; }

 private:
  OrthoBasis basis_;
  SubConfig config_;
  L1DualResult last_;
  Vector accepted_theta_;
  Vector accepted_lambda_;
};

}  // namespace spiral
