#include "spiral/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace spiral {

namespace {

class CanonicalL1Solver final : public SubproblemSolver {
 public:
  PenaltyKind kind() const override { return PenaltyKind::kCanonicalL1; }

  SubproblemSolution solve(const Signal& s, double kappa) override {
    SubproblemSolution out;
    out.f = denoise_canonical_l1(s, kappa);
    out.penalty = penalty(out.f);
    return out;
  }

  double penalty(const Signal& f) const override {
    double acc = 0.0;
    for (double v : f.values()) acc += std::abs(v);
    return acc;
  }
};

class TotalVariationSolver final : public SubproblemSolver {
 public:
  explicit TotalVariationSolver(const SubConfig& config) : config_(config) {}

  PenaltyKind kind() const override { return PenaltyKind::kTotalVariation; }

  SubproblemSolution solve(const Signal& s, double kappa) override {
    TvOptions options;
    options.tol = config_.tol;
    options.min_iter = config_.min_iter;
    options.max_iter = config_.max_iter;
    const TvDual* warm = config_.warm_start && has_accepted_ ? &accepted_ : nullptr;
    last_ = denoise_tv(s, kappa, options, warm);
    SubproblemSolution out;
    out.f = last_.f;
    out.penalty = tv_seminorm(out.f);
    out.inner_iterations = last_.iterations;
    return out;
  }

  double penalty(const Signal& f) const override { return tv_seminorm(f); }

  void accept() override {
    accepted_ = last_.dual;
    has_accepted_ = true;
  }

  void reset() override {
    accepted_ = {};
    has_accepted_ = false;
  }

 private:
  SubConfig config_;
  TvResult last_;
  TvDual accepted_;
  bool has_accepted_ = false;
};

class RdpSolver final : public SubproblemSolver {
 public:
  PenaltyKind kind() const override { return PenaltyKind::kRdp; }

  SubproblemSolution solve(const Signal& s, double kappa) override {
    RdpResult fit = rdp_fit(s, kappa);
    SubproblemSolution out;
    out.penalty = static_cast<double>(fit.cells.size());
    out.f = std::move(fit.f);
    return out;
  }

  double penalty(const Signal& f) const override {
    return static_cast<double>(rdp_cell_count(f));
  }
};

class RdpTiSolver final : public SubproblemSolver {
 public:
  RdpTiSolver(const SubConfig& config, Shape shape)
      : shifts_(shift_grid(shape.rows, config.ti_full_shifts ? shape.rows : config.ti_shift_extent)) {}

  PenaltyKind kind() const override { return PenaltyKind::kRdpTranslationInvariant; }

  SubproblemSolution solve(const Signal& s, double kappa) override {
    RdpTiResult fit = rdp_ti_fit(s, kappa, shifts_);
    SubproblemSolution out;
    out.penalty = fit.mean_cells;
    out.f = std::move(fit.f);
    return out;
  }

  double penalty(const Signal& f) const override {
    return static_cast<double>(rdp_cell_count(f));
  }

 private:
  std::vector<CyclicShift> shifts_;
};

}  // namespace

PenaltyKind parse_penalty_kind(std::string_view name) {
  if (name == "l1") return PenaltyKind::kCanonicalL1;
  if (name == "l1w") return PenaltyKind::kWaveletL1;
  if (name == "tv") return PenaltyKind::kTotalVariation;
  if (name == "rdp") return PenaltyKind::kRdp;
  if (name == "rdp-ti") return PenaltyKind::kRdpTranslationInvariant;
  throw std::invalid_argument("unknown penalty '" + std::string(name) + "'");
}

std::string to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kCanonicalL1: return "l1";
    case PenaltyKind::kWaveletL1: return "l1w";
    case PenaltyKind::kTotalVariation: return "tv";
    case PenaltyKind::kRdp: return "rdp";
    case PenaltyKind::kRdpTranslationInvariant: return "rdp-ti";
  }
  return "unknown";
}

SubConfig SubConfig::tight() {
  SubConfig config;
  config.tol = 1e-8;
  config.min_iter = 10;
  config.max_iter = 100;
  return config;
}

SubConfig SubConfig::loose() {
  SubConfig config;
  config.tol = 1e-4;
  config.min_iter = 0;
  config.max_iter = 10;
  return config;
}

WaveletL1Solver::WaveletL1Solver(OrthoBasis basis, const SubConfig& config)
    : basis_(std::move(basis)), config_(config) {}

SubproblemSolution WaveletL1Solver::solve(const Signal& s, double kappa) {
  L1DualOptions options;
  options.tol = config_.tol;
  options.min_iter = std::max<std::size_t>(config_.min_iter, 1);
  options.max_iter = config_.max_iter;
  const Vector coefficients = basis_.analysis(s.values());
  std::span<const double> warm;
  if (config_.warm_start && accepted_lambda_.size() == basis_.size()) warm = accepted_lambda_;
  last_ = denoise_l1_dual(coefficients, kappa, basis_, options, warm);
  SubproblemSolution out;
  out.f = last_.f;
  if (s.is_image()) out.f = Signal(std::move(out.f.values()), s.image_shape());
  double l1 = 0.0;
  for (double v : last_.theta) l1 += std::abs(v);
  out.penalty = l1;
  out.inner_iterations = last_.sweeps;
  return out;
}

double WaveletL1Solver::penalty(const Signal& f) const {
  double acc = 0.0;
  for (double v : basis_.analysis(f.values())) acc += std::abs(v);
  return acc;
}

void WaveletL1Solver::accept() {
  accepted_theta_ = last_.theta;
  accepted_lambda_ = last_.lambda;
}

void WaveletL1Solver::reset() {
  accepted_theta_.clear();
  accepted_lambda_.clear();
  last_ = {};
}

std::unique_ptr<SubproblemSolver> make_subproblem_solver(PenaltyKind kind, const SubConfig& config,
                                                         std::size_t n,
                                                         std::optional<Shape> shape) {
  auto need_shape = [&]() {
    if (!shape) throw std::invalid_argument(to_string(kind) + " penalty needs an image shape");
    if (shape->size() != n) throw std::invalid_argument("penalty: shape does not match n");
    return *shape;
  };
  switch (kind) {
    case PenaltyKind::kCanonicalL1: return std::make_unique<CanonicalL1Solver>();
    case PenaltyKind::kWaveletL1: {
      if (shape && shape->rows > 1) {
        return std::make_unique<WaveletL1Solver>(
            OrthoBasis(config.wavelet, need_shape(), config.wavelet_levels), config);
      }
      return std::make_unique<WaveletL1Solver>(OrthoBasis(config.wavelet, n, config.wavelet_levels),
                                               config);
    }
    case PenaltyKind::kTotalVariation:
      need_shape();
      return std::make_unique<TotalVariationSolver>(config);
    case PenaltyKind::kRdp:
      need_shape();
      return std::make_unique<RdpSolver>();
    case PenaltyKind::kRdpTranslationInvariant:
      return std::make_unique<RdpTiSolver>(config, need_shape());
  }
  throw std::invalid_argument("make_subproblem_solver: bad kind");
}

}  // namespace spiral
