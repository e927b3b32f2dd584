#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spiral/linear_map.hpp"
#include "spiral/penalty.hpp"
#include "spiral/poisson.hpp"
#include "spiral/signal.hpp"
#include "spiral/solver.hpp"

namespace spiral {

enum class InitPolicy {
  kScaledBackprojection,  // c A^T y with 1^T A f0 = sum(y), clipped at 0
  kUniform,               // constant image with 1^T A f0 = sum(y)
};

InitPolicy parse_init_policy(std::string_view name);
std::string to_string(InitPolicy policy);

Signal initialize(const LinearMap& system, std::span<const double> counts, InitPolicy policy,
                  std::optional<Shape> shape = std::nullopt);
Signal initialize(const PoissonModel& model, InitPolicy policy = InitPolicy::kScaledBackprojection,
                  std::optional<Shape> shape = std::nullopt);

struct MethodSpec {
  std::string name;
  PenaltyKind penalty = PenaltyKind::kTotalVariation;
  SubConfig sub;
  bool acceptance = true;
  double tau_min = 1e-3;
  double tau_max = 1.0;
  std::size_t tau_points = 10;
};

// Log-spaced, inclusive of both bounds; a single point uses tau_min.
std::vector<double> tau_grid(const MethodSpec& method);

struct ExperimentConfig {
  std::size_t side = 64;
  std::size_t n_angles = 60;
  double angle_span_degrees = 135.0;
  std::size_t n_radial = 64;
  double total_counts = 2.0e5;
  std::uint64_t seed = 20100401;
  std::size_t trials = 10;
  InitPolicy init = InitPolicy::kScaledBackprojection;
  double beta = 1e-10;
  // Shared outer settings; tau, penalty, sub and acceptance come per method.
  SolverConfig solver;
  std::vector<MethodSpec> methods;
  std::size_t threads = 1;  // 0 = hardware concurrency
  bool write_images = true;
  bool write_traces = true;

  // The eight SPIRAL variants on the 64x64 phantom.
  static ExperimentConfig defaults();
  void validate() const;
};

std::vector<MethodSpec> default_methods();

// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
// Fully resolved config as JSON.
std::string experiment_config_json(const ExperimentConfig& config);

struct SweepRecord {
  std::size_t trial = 0;
  std::string method;
  double tau = 0.0;
  double rmse_percent = 0.0;
  std::size_t iterations = 0;
  std::string termination;
  double final_relative_change = 0.0;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::string method;
  double tau = 0.0;  // best tau
  double rmse_percent = 0.0;
  double wall_seconds = 0.0;
  std::size_t iterations = 0;
  std::string termination;
  double final_relative_change = 0.0;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // trial-major, methods in config order
  std::vector<SweepRecord> sweep;    // trial, method, tau order
  std::vector<double> initial_rmse;  // per trial
  double total_seconds = 0.0;
};

// Runs every (trial, method, tau) cell and keeps the best-RMSE tau per
// (trial, method). When `out_dir` is set, writes summary.csv, sweep.csv,
// timing.csv, manifest.json, images and traces there.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                std::ostream* log = nullptr);

// trial,method,tau,rmse_percent,iterations,termination
void write_summary_csv(std::ostream& out, std::span<const TrialRecord> records);

}  // namespace spiral
