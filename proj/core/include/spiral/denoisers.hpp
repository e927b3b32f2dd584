#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "spiral/signal.hpp"
#include "spiral/wavelet.hpp"

namespace spiral {

// Each denoiser minimizes 1/2 ||f - s||^2 + kappa * pen(f) subject to f >= 0
// and returns a bitwise nonnegative result.

// ---------------------------------------------------------------------------
// Canonical l1: f = [s - kappa]_+.

Signal denoise_canonical_l1(const Signal& s, double kappa);

// ---------------------------------------------------------------------------
// l1 in an orthonormal basis, solved through the Lagrangian dual
//
//   min_{gamma, lambda} h = 1/2 ||s + gamma + W^T lambda||^2 - 1/2 ||s||^2
//   s.t. -kappa <= gamma <= kappa, lambda >= 0
//
// by exact block-coordinate sweeps. `s` lives in the coefficient domain.

struct L1DualOptions {
  double tol = 1e-8;  // relative duality gap
  std::size_t min_iter = 1;
  std::size_t max_iter = 100;
  bool record_trace = false;
};

struct L1DualSweep {
  std::size_t sweep = 0;
  double primal = 0.0;          // phi(theta)
  double dual = 0.0;            // -h(gamma, lambda), a lower bound on min phi
  double gap = 0.0;             // |phi + h| / |phi|
  double min_constraint = 0.0;  // min_i [W(s + gamma)]_+
};

struct L1DualResult {
  Vector theta;   // s + gamma + W^T lambda
  Signal f;       // [W(s + gamma)]_+ = W theta, exactly nonnegative
  Vector gamma;
  Vector lambda;  // multiplier of W theta >= 0
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::size_t sweeps = 0;
  std::vector<L1DualSweep> trace;
};

// phi(theta) = 1/2 ||theta - s||^2 + kappa ||theta||_1
double l1_subproblem_objective(std::span<const double> theta, std::span<const double> s,
                               double kappa);

// `lambda_init` (signal domain, >= 0) warm-starts the first gamma update;
// empty means lambda = 0. Throws std::invalid_argument for kappa < 0.
L1DualResult denoise_l1_dual(std::span<const double> s, double kappa, const OrthoBasis& basis,
                             const L1DualOptions& options = {},
                             std::span<const double> lambda_init = {});

// ---------------------------------------------------------------------------
// Anisotropic total variation, solved by fast gradient projection on the dual
// of the difference operator with the nonnegativity projection folded into
// the primal recovery and a monotone restart.

struct TvOptions {
  double tol = 1e-6;  // relative change of the primal iterate
  std::size_t min_iter = 0;
  std::size_t max_iter = 200;
};

// Dual variables for the horizontal and vertical differences.
struct TvDual {
  Vector horizontal;  // rows x (cols - 1)
  Vector vertical;    // (rows - 1) x cols
};

struct TvResult {
  Signal f;
  TvDual dual;
  double objective = 0.0;
  std::size_t iterations = 0;
};

// sum |f(r,c) - f(r+1,c)| + sum |f(r,c) - f(r,c+1)|
double tv_seminorm(const Signal& f);

double tv_objective(const Signal& f, const Signal& s, double kappa);

// Requires a square image. `warm` may be null or hold a dual of matching
// dimensions; it is clipped into the dual box before use.
TvResult denoise_tv(const Signal& s, double kappa, const TvOptions& options = {},
                    const TvDual* warm = nullptr);

// Norm of the projected subgradient of the TV objective at f. Differences
// with magnitude above `zero_threshold` take their sign as subgradient; the
// rest take the clipped dual value.
double tv_kkt_residual(const Signal& f, const Signal& s, double kappa, const TvDual& dual,
                       double zero_threshold = 1e-9);

// ---------------------------------------------------------------------------
// Recursive dyadic partitions with constant nonnegative cell fits.

struct RdpCell {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t side = 1;
  double value = 0.0;
};

enum class RdpDecision { kKeep, kSplit };

struct RdpNode {
  RdpCell cell;
  double merged_cost = 0.0;  // 1/2 ||s_cell - fit||^2 + kappa
  double split_cost = 0.0;   // sum of the children's optimal costs; unused for pixels
  double optimal_cost = 0.0;
  RdpDecision decision = RdpDecision::kKeep;
};

struct RdpResult {
  std::vector<RdpCell> cells;  // pruned partition, depth-first NW, NE, SW, SE
  Signal f;
  double cost = 0.0;  // 1/2 ||s - f||^2 + kappa |P|
};

// Exact minimizer over all RDPs of a 2^p x 2^p image. Ties go to the merged
// (coarser) cell.
RdpResult rdp_fit(const Signal& s, double kappa);

// Every node of the full quadtree with its costs and decision, coarse levels
// first.
std::vector<RdpNode> rdp_tree(const Signal& s, double kappa);

using CyclicShift = std::pair<std::size_t, std::size_t>;

// {0, ..., extent - 1}^2 clamped to the image side.
std::vector<CyclicShift> shift_grid(std::size_t side, std::size_t extent);

struct RdpTiResult {
  Signal f;
  double mean_cells = 0.0;
};

// Average of unshift(rdp_fit(shift(s))) over the given cyclic shifts, summed
// in the given order.
RdpTiResult rdp_ti_fit(const Signal& s, double kappa, std::span<const CyclicShift> shifts);

// Minimal number of RDP cells on which f is exactly piecewise constant.
std::size_t rdp_cell_count(const Signal& f);

// row,col,side,value rows with a header line.
void write_partition_csv(std::ostream& out, std::span<const RdpCell> cells);

}  // namespace spiral
