#include "spiral/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "spiral/image_io.hpp"
#include "spiral/metrics.hpp"
#include "spiral/phantom.hpp"
#include "spiral/sampling.hpp"
#include "spiral/tomography.hpp"

namespace spiral {

namespace fs = std::filesystem;
using nlohmann::json;

InitPolicy parse_init_policy(std::string_view name) {
  if (name == "scaled-backprojection") return InitPolicy::kScaledBackprojection;
  if (name == "uniform") return InitPolicy::kUniform;
  throw std::invalid_argument("unknown initialization policy '" + std::string(name) + "'");
}

std::string to_string(InitPolicy policy) {
  return policy == InitPolicy::kUniform ? "uniform" : "scaled-backprojection";
}

Signal initialize(const LinearMap& system, std::span<const double> counts, InitPolicy policy,
                  std::optional<Shape> shape) {
  require_size(counts, system.rows(), "initialize counts");
  const double total = sum(counts);
  Vector f(system.cols(), 0.0);
  if (total > 0.0) {
    Vector direction = policy == InitPolicy::kUniform
                           ? Vector(system.cols(), 1.0)
                           : system.adjoint(Vector(counts.begin(), counts.end()));
    const double mass = sum(system.forward(direction));
    if (mass > 0.0) {
      const double c = total / mass;
      for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::max(c * direction[j], 0.0);
    }
  }
  if (shape) return Signal(std::move(f), *shape);
  return Signal(std::move(f));
}

Signal initialize(const PoissonModel& model, InitPolicy policy, std::optional<Shape> shape) {
  return initialize(model.A(), model.counts, policy, shape);
}

std::vector<double> tau_grid(const MethodSpec& method) {
  std::vector<double> grid;
  if (method.tau_points == 1) return {method.tau_min};
  const double lo = std::log(method.tau_min);
  const double hi = std::log(method.tau_max);
  for (std::size_t i = 0; i < method.tau_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(method.tau_points - 1);
    grid.push_back(std::exp(lo + t * (hi - lo)));
  }
  return grid;
}

std::vector<MethodSpec> default_methods() {
  const auto make = [](std::string name, PenaltyKind kind, SubConfig sub, bool acceptance,
                       double lo, double hi) {
    MethodSpec m;
    m.name = std::move(name);
    m.penalty = kind;
    m.sub = sub;
    m.acceptance = acceptance;
    m.tau_min = lo;
    m.tau_max = hi;
    return m;
  };
  SubConfig rdp_sub;
  return {
      make("l1-loose", PenaltyKind::kWaveletL1, SubConfig::loose(), true, 0.05, 5.0),
      make("l1-tight", PenaltyKind::kWaveletL1, SubConfig::tight(), true, 0.05, 5.0),
      make("tv-L-M", PenaltyKind::kTotalVariation, SubConfig::loose(), true, 0.05, 5.0),
      make("tv-L-NM", PenaltyKind::kTotalVariation, SubConfig::loose(), false, 0.05, 5.0),
      make("tv-T-M", PenaltyKind::kTotalVariation, SubConfig::tight(), true, 0.05, 5.0),
      make("tv-T-NM", PenaltyKind::kTotalVariation, SubConfig::tight(), false, 0.05, 5.0),
      make("rdp", PenaltyKind::kRdp, rdp_sub, true, 0.05, 5.0),
      make("rdp-ti", PenaltyKind::kRdpTranslationInvariant, rdp_sub, true, 0.2, 20.0),
  };
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig config;
  config.solver.max_iter = 300;
  // Paper protocol: stop on the relative iterate change only.
  config.solver.stop_on_objective_change = false;
  config.methods = default_methods();
  return config;
}

void ExperimentConfig::validate() const {
  if (side < 4 || !is_power_of_two(side)) {
    throw std::invalid_argument("experiment: side must be a power of two >= 4");
  }
  if (n_angles == 0 || n_radial == 0) throw std::invalid_argument("experiment: empty projector");
  if (!(total_counts > 0.0)) throw std::invalid_argument("experiment: total_counts must be > 0");
  if (trials == 0) throw std::invalid_argument("experiment: trials must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("experiment: beta must be > 0");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods configured");
  for (const MethodSpec& m : methods) {
    if (m.name.empty()) throw std::invalid_argument("experiment: method without a name");
    if (!(m.tau_min > 0.0) || !(m.tau_max >= m.tau_min) || m.tau_points == 0) {
      throw std::invalid_argument("experiment: bad tau grid for " + m.name);
    }
  }
  solver.validate();
}

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw std::invalid_argument("experiment config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

SubConfig parse_sub(const json& j, SubConfig sub) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "loose") return SubConfig::loose();
    if (name == "tight") return SubConfig::tight();
    throw std::invalid_argument("experiment config: subproblem preset must be loose or tight");
  }
  reject_unknown(j, {"preset", "tol", "min_iter", "max_iter", "warm_start", "wavelet",
                     "wavelet_levels", "ti_shift_extent", "ti_full_shifts"},
                 "subproblem");
  if (j.contains("preset")) sub = parse_sub(j.at("preset"), sub);
  read_if(j, "tol", sub.tol);
  read_if(j, "min_iter", sub.min_iter);
  read_if(j, "max_iter", sub.max_iter);
  read_if(j, "warm_start", sub.warm_start);
  if (j.contains("wavelet")) sub.wavelet = parse_wavelet_family(j.at("wavelet").get<std::string>());
  read_if(j, "wavelet_levels", sub.wavelet_levels);
  read_if(j, "ti_shift_extent", sub.ti_shift_extent);
  read_if(j, "ti_full_shifts", sub.ti_full_shifts);
  return sub;
}

json sub_json(const SubConfig& sub) {
  return {{"tol", sub.tol},
          {"min_iter", sub.min_iter},
          {"max_iter", sub.max_iter},
          {"warm_start", sub.warm_start},
          {"wavelet", to_string(sub.wavelet)},
          {"wavelet_levels", sub.wavelet_levels},
          {"ti_shift_extent", sub.ti_shift_extent},
          {"ti_full_shifts", sub.ti_full_shifts}};
}

MethodSpec parse_method(const json& j) {
  reject_unknown(j, {"name", "penalty", "subproblem", "acceptance", "tau", "tau_min", "tau_max",
                     "tau_points"},
                 "method");
  MethodSpec m;
  if (j.contains("name")) {
    // Named methods start from the matching default.
    const auto name = j.at("name").get<std::string>();
    for (const MethodSpec& d : default_methods()) {
      if (d.name == name) m = d;
    }
    m.name = name;
  }
  if (j.contains("penalty")) m.penalty = parse_penalty_kind(j.at("penalty").get<std::string>());
  if (j.contains("subproblem")) m.sub = parse_sub(j.at("subproblem"), m.sub);
  read_if(j, "acceptance", m.acceptance);
  read_if(j, "tau_min", m.tau_min);
  read_if(j, "tau_max", m.tau_max);
  read_if(j, "tau_points", m.tau_points);
  if (j.contains("tau")) {
    m.tau_min = m.tau_max = j.at("tau").get<double>();
    m.tau_points = 1;
  }
  return m;
}

void parse_solver(const json& j, SolverConfig& s) {
  reject_unknown(j, {"eta", "sigma", "window", "alpha_min", "alpha_max", "tol", "min_iter",
                     "max_iter", "stop_on_iterate_change", "stop_on_objective_change",
                     "stop_on_kkt"},
                 "solver");
  read_if(j, "eta", s.eta);
  read_if(j, "sigma", s.sigma);
  read_if(j, "window", s.window);
  read_if(j, "alpha_min", s.alpha_min);
  read_if(j, "alpha_max", s.alpha_max);
  read_if(j, "tol", s.tol);
  read_if(j, "min_iter", s.min_iter);
  read_if(j, "max_iter", s.max_iter);
  read_if(j, "stop_on_iterate_change", s.stop_on_iterate_change);
  read_if(j, "stop_on_objective_change", s.stop_on_objective_change);
  read_if(j, "stop_on_kkt", s.stop_on_kkt);
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  const json j = json::parse(json_text);
  reject_unknown(j, {"side", "n_angles", "angle_span_degrees", "n_radial", "total_counts", "seed",
                     "trials", "initialization", "beta", "solver", "methods", "threads",
                     "write_images", "write_traces"},
                 "config");
  ExperimentConfig config = ExperimentConfig::defaults();
  read_if(j, "side", config.side);
  read_if(j, "n_angles", config.n_angles);
  read_if(j, "angle_span_degrees", config.angle_span_degrees);
  read_if(j, "n_radial", config.n_radial);
  read_if(j, "total_counts", config.total_counts);
  read_if(j, "seed", config.seed);
  read_if(j, "trials", config.trials);
  if (j.contains("initialization")) {
    config.init = parse_init_policy(j.at("initialization").get<std::string>());
  }
  read_if(j, "beta", config.beta);
  if (j.contains("solver")) parse_solver(j.at("solver"), config.solver);
  if (j.contains("methods")) {
    config.methods.clear();
    for (const json& m : j.at("methods")) {
      config.methods.push_back(m.is_string() ? parse_method(json{{"name", m}}) : parse_method(m));
    }
  }
  read_if(j, "threads", config.threads);
  read_if(j, "write_images", config.write_images);
  read_if(j, "write_traces", config.write_traces);
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::string experiment_config_json(const ExperimentConfig& config) {
  json methods = json::array();
  for (const MethodSpec& m : config.methods) {
    methods.push_back({{"name", m.name},
                       {"penalty", to_string(m.penalty)},
                       {"subproblem", sub_json(m.sub)},
                       {"acceptance", m.acceptance},
                       {"tau_min", m.tau_min},
                       {"tau_max", m.tau_max},
                       {"tau_points", m.tau_points}});
  }
  const SolverConfig& s = config.solver;
  json j = {{"side", config.side},
            {"n_angles", config.n_angles},
            {"angle_span_degrees", config.angle_span_degrees},
            {"n_radial", config.n_radial},
            {"total_counts", config.total_counts},
            {"seed", config.seed},
            {"trials", config.trials},
            {"initialization", to_string(config.init)},
            {"beta", config.beta},
            {"solver",
             {{"eta", s.eta},
              {"sigma", s.sigma},
              {"window", s.window},
              {"alpha_min", s.alpha_min},
              {"alpha_max", s.alpha_max},
              {"tol", s.tol},
              {"min_iter", s.min_iter},
              {"max_iter", s.max_iter},
              {"stop_on_iterate_change", s.stop_on_iterate_change},
              {"stop_on_objective_change", s.stop_on_objective_change},
              {"stop_on_kkt", s.stop_on_kkt}}},
            {"methods", methods},
            {"threads", config.threads},
            {"write_images", config.write_images},
            {"write_traces", config.write_traces}};
  return j.dump(2);
}

namespace {

struct TrialData {
  std::shared_ptr<PoissonModel> model;
  Signal truth;  // count-scaled
  Signal f0;
};

struct Job {
  std::size_t trial;
  std::size_t method;
  double tau;
};

struct JobOutput {
  SweepRecord record;
  Signal estimate;
  std::vector<TraceRecord> trace;
};

JobOutput run_job(const ExperimentConfig& config, const TrialData& data, const Job& job) {
  const MethodSpec& method = config.methods[job.method];
  JobOutput out;
  out.record.trial = job.trial;
  out.record.method = method.name;
  out.record.tau = job.tau;

  SolverConfig solver = config.solver;
  solver.tau = job.tau;
  solver.penalty = method.penalty;
  solver.sub = method.sub;
  solver.acceptance_enabled = method.acceptance;
  if (method.penalty != PenaltyKind::kWaveletL1) solver.stop_on_kkt = false;

  const auto start = std::chrono::steady_clock::now();
  try {
    SolverResult result = run(*data.model, solver, data.f0, &data.truth);
    out.record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!result.estimate.all_finite() || !result.estimate.feasible()) {
      throw std::runtime_error("estimate is not finite and nonnegative");
    }
    out.record.rmse_percent = rmse_percent(result.estimate.values(), data.truth.values());
    out.record.iterations = result.iterations;
    out.record.termination = to_string(result.reason);
    out.record.final_relative_change =
        result.trace.empty() ? 0.0 : result.trace.back().relative_change;
    out.estimate = std::move(result.estimate);
    out.trace = std::move(result.trace);
  } catch (const std::exception& e) {
    out.record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.record.failed = true;
    out.record.termination = "failed";
    out.record.error = e.what();
    out.record.rmse_percent = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

// Static round-robin would tie results to thread count; a shared counter
// with indexed output slots keeps the merge order fixed.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return out;
}

}  // namespace

void write_summary_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial,method,tau,rmse_percent,iterations,termination\n" << std::setprecision(12);
  for (const TrialRecord& r : records) {
    out << r.trial << ',' << r.method << ',' << r.tau << ',';
    if (!r.failed) out << r.rmse_percent;
    out << ',' << r.iterations << ',' << r.termination << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<fs::path>& out_dir, std::ostream* log) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::size_t threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const Phantom phantom = make_phantom(config.side);
  const TomographyModel tomo =
      build_tomography(config.side, config.side, config.n_angles, config.angle_span_degrees,
                       config.n_radial, phantom.attenuation);
  const Shape shape{config.side, config.side};

  ExperimentResult result;
  std::vector<TrialData> trials(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    const PoissonSample sample =
        sample_poisson(*tomo.system, phantom.emission, config.total_counts,
                       splitmix64(config.seed + t));
    TrialData& data = trials[t];
    data.model = std::make_shared<PoissonModel>(tomo.system, sample.counts, config.beta);
    data.truth = sample.scaled_truth;
    data.f0 = initialize(*data.model, config.init, shape);
    result.initial_rmse.push_back(rmse_percent(data.f0.values(), data.truth.values()));
  }

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < config.trials; ++t) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      for (double tau : tau_grid(config.methods[m])) jobs.push_back({t, m, tau});
    }
  }

  // Only the best estimate per (trial, method) is kept in memory.
  const std::size_t cells = config.trials * config.methods.size();
  std::vector<JobOutput> best(cells);
  std::vector<SweepRecord> sweep(jobs.size());
  std::vector<std::mutex> locks(cells);
  std::atomic<std::size_t> finished{0};
  std::mutex log_lock;

  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    JobOutput out = run_job(config, trials[job.trial], job);
    sweep[i] = out.record;
    const std::size_t cell = job.trial * config.methods.size() + job.method;
    {
      std::lock_guard lock(locks[cell]);
      JobOutput& current = best[cell];
      // Ties and ordering resolved by grid position, independent of timing.
      const auto rank = [&](const SweepRecord& r) {
        return std::pair(r.failed ? std::numeric_limits<double>::infinity() : r.rmse_percent, r.tau);
      };
      if (current.record.method.empty() || rank(out.record) < rank(current.record)) {
        current = std::move(out);
      }
    }
    const std::size_t done = ++finished;
    if (log != nullptr) {
      std::lock_guard lock(log_lock);
      const SweepRecord& r = sweep[i];
      *log << '[' << done << '/' << jobs.size() << "] trial " << r.trial << ' ' << r.method
           << " tau=" << r.tau << " rmse=" << r.rmse_percent << "% iters=" << r.iterations << ' '
           << r.termination << ' ' << std::fixed << std::setprecision(2) << r.wall_seconds << "s"
           << std::defaultfloat << std::setprecision(6) << '\n';
    }
  });

  result.sweep = std::move(sweep);
  for (std::size_t t = 0; t < config.trials; ++t) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const std::size_t cell = t * config.methods.size() + m;
      TrialRecord rec;
      rec.trial = t;
      rec.method = config.methods[m].name;
      // A failure at any tau aborts the (trial, method) cell.
      const SweepRecord* failure = nullptr;
      for (const SweepRecord& s : result.sweep) {
        if (s.trial == t && s.method == rec.method && s.failed && failure == nullptr) failure = &s;
      }
      if (failure != nullptr) {
        rec.tau = failure->tau;
        rec.failed = true;
        rec.termination = "failed";
        rec.error = failure->error;
        rec.wall_seconds = failure->wall_seconds;
        best[cell].estimate = Signal();
      } else {
        const SweepRecord& b = best[cell].record;
        rec.tau = b.tau;
        rec.rmse_percent = b.rmse_percent;
        rec.wall_seconds = b.wall_seconds;
        rec.iterations = b.iterations;
        rec.termination = b.termination;
        rec.final_relative_change = b.final_relative_change;
      }
      result.records.push_back(rec);
    }
  }
  result.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!out_dir) return result;
  fs::create_directories(*out_dir);
  {
    std::ofstream out(*out_dir / "summary.csv");
    write_summary_csv(out, result.records);
  }
  {
    std::ofstream out(*out_dir / "sweep.csv");
    out << "trial,method,tau,rmse_percent,iterations,termination,final_relative_change\n"
        << std::setprecision(12);
    for (const SweepRecord& r : result.sweep) {
      out << r.trial << ',' << r.method << ',' << r.tau << ',';
      if (!r.failed) out << r.rmse_percent;
      out << ',' << r.iterations << ',' << r.termination << ',' << r.final_relative_change << '\n';
    }
  }
  {
    std::ofstream out(*out_dir / "timing.csv");
    out << "trial,method,tau,wall_seconds,best\n" << std::setprecision(6);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const SweepRecord& r = result.sweep[i];
      const TrialRecord& rec = result.records[jobs[i].trial * config.methods.size() + jobs[i].method];
      out << r.trial << ',' << r.method << ',' << r.tau << ',' << r.wall_seconds << ','
          << (rec.tau == r.tau ? 1 : 0) << '\n';
    }
  }
  {
    json manifest = json::parse(experiment_config_json(config));
    manifest["initial_rmse_percent"] = result.initial_rmse;
    json failures = json::array();
    for (const TrialRecord& r : result.records) {
      if (r.failed) failures.push_back({{"trial", r.trial}, {"method", r.method}, {"error", r.error}});
    }
    manifest["failures"] = failures;
    std::ofstream out(*out_dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  if (config.write_images) {
    write_pgm(*out_dir / "truth.pgm", trials[0].truth);
    write_pgm(*out_dir / "attenuation.pgm", phantom.attenuation);
    for (std::size_t t = 0; t < config.trials; ++t) {
      write_pgm(*out_dir / ("trial" + std::to_string(t) + "_init.pgm"), trials[t].f0);
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const Signal& est = best[t * config.methods.size() + m].estimate;
        if (est.empty()) continue;
        write_pgm(*out_dir / ("trial" + std::to_string(t) + "_" + slug(config.methods[m].name) +
                              ".pgm"),
                  est);
      }
    }
  }
  if (config.write_traces) {
    for (std::size_t t = 0; t < config.trials; ++t) {
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const JobOutput& b = best[t * config.methods.size() + m];
        if (b.estimate.empty()) continue;
        std::ofstream out(*out_dir / ("trial" + std::to_string(t) + "_" +
                                      slug(config.methods[m].name) + "_trace.csv"));
        write_trace_csv(out, b.trace);
      }
    }
  }
  return result;
}

}  // namespace spiral
