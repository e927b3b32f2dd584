#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "doctest.h"
#include "spiral/experiment.hpp"
#include "spiral/image_io.hpp"
#include "spiral/metrics.hpp"
#include "spiral/phantom.hpp"
#include "spiral/sampling.hpp"
#include "spiral/tomography.hpp"
#include "support.hpp"

using namespace spiral;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spiral_tests_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentConfig smoke_config() {
  return parse_experiment_config(R"({
    "side": 32, "n_angles": 30, "n_radial": 32, "total_counts": 50000, "trials": 1,
    "methods": [{"name": "tv-L-NM", "tau_min": 0.1, "tau_max": 1.0, "tau_points": 3}]
  })");
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("phantom construction properties") {
  const Phantom p = make_phantom(64);
  const auto& e = p.emission.values();
  CHECK(std::set<double>(e.begin(), e.end()).size() >= 3);
  CHECK(min_value(e) == 0.0);
  CHECK(min_value(p.attenuation.values()) >= 0.0);
  CHECK(max_value(p.attenuation.values()) <= 0.02);
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) {
      CHECK(p.emission.at(r, c) == p.emission.at(r, 63 - c));
      CHECK(p.attenuation.at(r, c) == p.attenuation.at(r, 63 - c));
    }
  }
  CHECK(make_phantom(64).emission.values() == e);
}

TEST_CASE("zero truth draws zero counts") {
  const TomographyModel tomo = build_tomography(8, 8, 4, 135.0, 8, Signal::zeros(Shape{8, 8}));
  const PoissonSample s = sample_poisson(*tomo.system, Signal::zeros(Shape{8, 8}), 1000.0, 1);
  for (double y : s.counts) CHECK(y == 0.0);
}

TEST_CASE("sampling is reproducible and scaled") {
  const Phantom p = make_phantom(16);
  const TomographyModel tomo = build_tomography(16, 16, 8, 135.0, 16, p.attenuation);
  const auto a = sample_poisson(*tomo.system, p.emission, 5000.0, 42);
  const auto b = sample_poisson(*tomo.system, p.emission, 5000.0, 42);
  const auto c = sample_poisson(*tomo.system, p.emission, 5000.0, 43);
  CHECK(a.counts == b.counts);
  CHECK(a.counts != c.counts);
  CHECK(sum(a.mean) == doctest::Approx(5000.0).epsilon(1e-12));
  CHECK(sum(tomo.system->forward(a.scaled_truth.values())) == doctest::Approx(5000.0).epsilon(1e-12));
  for (double y : a.counts) CHECK(y == std::floor(y));
}

TEST_CASE("total counts average to the target") {
  const Phantom p = make_phantom(16);
  const TomographyModel tomo = build_tomography(16, 16, 8, 135.0, 16, p.attenuation);
  const double target = 5000.0;
  double mean = 0.0;
  const int draws = 200;
  for (int k = 0; k < draws; ++k) mean += sum(sample_poisson(*tomo.system, p.emission, target, 1000 + k).counts);
  mean /= draws;
  // sd of the sum is sqrt(target); sd of the mean is that over sqrt(draws).
  CHECK(std::abs(mean - target) <= 3.0 * std::sqrt(target / draws));
}

TEST_CASE("poisson draws match mean and variance across regimes") {
  for (double lambda : {0.3, 4.0, 29.0, 31.0, 250.0}) {
    const int n = 40000;
    double m = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      CounterRng rng(7, static_cast<std::uint64_t>(i));
      const double k = static_cast<double>(poisson_draw(lambda, rng));
      m += k;
      m2 += k * k;
    }
    m /= n;
    const double var = m2 / n - m * m;
    CHECK(std::abs(m - lambda) <= 4.0 * std::sqrt(lambda / n));
    CHECK(var == doctest::Approx(lambda).epsilon(0.05));
  }
}

TEST_CASE("rmse formula") {
  const Vector truth{1, 2, 3};
  CHECK(rmse_percent(truth, truth) == 0.0);
  CHECK(rmse_percent(Vector{0, 0, 0}, truth) == 100.0);
  CHECK(rmse_percent(Vector{1.1, 2.2, 3.3}, truth) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS(rmse_percent(truth, Vector{0, 0, 0}));
}

TEST_CASE("initialization policy") {
  auto id = std::make_shared<IdentityMap>(3);
  CHECK(initialize(*id, Vector(3, 0.0), InitPolicy::kScaledBackprojection).values() == Vector(3, 0.0));
  CHECK(initialize(*id, Vector{1, 4, 2}, InitPolicy::kScaledBackprojection).values() == Vector{1, 4, 2});
  const Phantom p = make_phantom(16);
  const TomographyModel tomo = build_tomography(16, 16, 8, 135.0, 16, p.attenuation);
  const auto sample = sample_poisson(*tomo.system, p.emission, 4000.0, 3);
  for (InitPolicy policy : {InitPolicy::kScaledBackprojection, InitPolicy::kUniform}) {
    const Signal f0 = initialize(*tomo.system, sample.counts, policy, Shape{16, 16});
    CHECK(min_value(f0.values()) >= 0.0);
    CHECK(sum(tomo.system->forward(f0.values())) == doctest::Approx(sum(sample.counts)).epsilon(1e-10));
  }
}

TEST_CASE("pgm round trip at 16 and 8 bits") {
  const fs::path dir = scratch("pgm");
  const Phantom p = make_phantom(16);
  for (PgmEncoding enc : {PgmEncoding::kAscii, PgmEncoding::kBinary}) {
    for (int max_gray : {255, 65535}) {
      const fs::path path = dir / ("img" + std::to_string(max_gray) + ".pgm");
      const double scale = write_pgm(path, p.emission, enc, max_gray);
      CHECK(fs::exists(pgm_sidecar_path(path)));
      const Signal back = read_pgm(path);
      REQUIRE(back.image_shape() == Shape{16, 16});
      for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(std::abs(back[i] - p.emission[i]) <= 0.5 * scale + 1e-12);
      }
    }
  }
}

TEST_CASE("pgm writer clips negatives and reader rejects junk") {
  const fs::path dir = scratch("pgm2");
  write_pgm(dir / "neg.pgm", Signal(Vector{-1, 2, 0, 4}, Shape{2, 2}), PgmEncoding::kAscii);
  fs::remove(pgm_sidecar_path(dir / "neg.pgm"));
  const Signal back = read_pgm(dir / "neg.pgm");
  CHECK(back.values() == Vector{0, 32768, 0, 65535});
  std::ofstream(dir / "bad.pgm") << "P6\n1 1\n255\n";
  CHECK_THROWS(read_pgm(dir / "bad.pgm"));
  CHECK_THROWS(read_pgm(dir / "missing.pgm"));
}

TEST_CASE("csv image round trip") {
  const fs::path dir = scratch("csv");
  std::mt19937_64 rng(4);
  const Signal img(test::normal_vector(12, rng), Shape{3, 4});
  write_csv_image(dir / "img.csv", img);
  const Signal back = read_csv_image(dir / "img.csv");
  CHECK(back.values() == img.values());
  CHECK(back.image_shape() == Shape{3, 4});
}

TEST_CASE("config parsing") {
  const ExperimentConfig d = ExperimentConfig::defaults();
  CHECK(d.side == 64);
  CHECK(d.n_angles == 60);
  CHECK(d.n_radial == 64);
  CHECK(d.total_counts == 2e5);
  CHECK(d.methods.size() == 8);
  for (const MethodSpec& m : d.methods) CHECK(tau_grid(m).size() == 10);

  const ExperimentConfig c = parse_experiment_config(R"({"trials": 3, "methods": ["rdp", {"name": "l1-loose", "tau": 0.5, "subproblem": {"wavelet": "db6"}}]})");
  CHECK(c.trials == 3);
  REQUIRE(c.methods.size() == 2);
  CHECK(c.methods[0].penalty == PenaltyKind::kRdp);
  CHECK(c.methods[1].tau_points == 1);
  CHECK(c.methods[1].sub.wavelet == WaveletFamily::kDaubechies6);
  CHECK(c.methods[1].sub.max_iter == SubConfig::loose().max_iter);

  CHECK_THROWS(parse_experiment_config(R"({"sidee": 64})"));
  CHECK_THROWS(parse_experiment_config(R"({"side": 48})"));
  CHECK_THROWS(parse_experiment_config(R"({"methods": [{"name": "x", "tau_min": -1}]})"));

  const ExperimentConfig again = parse_experiment_config(experiment_config_json(c));
  CHECK(experiment_config_json(again) == experiment_config_json(c));
}

TEST_CASE("tau grid is log spaced and inclusive") {
  MethodSpec m;
  m.tau_min = 0.01;
  m.tau_max = 100.0;
  m.tau_points = 5;
  const auto grid = tau_grid(m);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(0.01));
  CHECK(grid[2] == doctest::Approx(1.0));
  CHECK(grid.back() == doctest::Approx(100.0));
}

TEST_CASE("smoke experiment runs quickly and writes its outputs") {
  const fs::path dir = scratch("smoke");
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(smoke_config(), dir);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 60.0);
  REQUIRE(result.records.size() == 1);
  CHECK_FALSE(result.records[0].failed);
  CHECK(result.records[0].rmse_percent >= 0.0);
  CHECK(result.records[0].rmse_percent <= result.initial_rmse[0]);
  CHECK(result.sweep.size() == 3);
  for (const char* name : {"summary.csv", "sweep.csv", "timing.csv", "manifest.json", "truth.pgm",
                           "trial0_tv-L-NM.pgm", "trial0_tv-L-NM_trace.csv"}) {
    CHECK(fs::exists(dir / name));
  }
  const Signal written = read_pgm(dir / "trial0_tv-L-NM.pgm");
  CHECK(written.feasible());
}

TEST_CASE("summary rows equal trials times methods and are reproducible") {
  ExperimentConfig config = parse_experiment_config(R"({
    "side": 16, "n_angles": 12, "n_radial": 16, "total_counts": 20000, "trials": 2,
    "solver": {"max_iter": 60},
    "methods": [{"name": "l1-loose", "tau": 0.3}, {"name": "tv-L-M", "tau": 0.3},
                {"name": "rdp", "tau": 0.5}],
    "write_images": false, "write_traces": false
  })");
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  run_experiment(config, a);
  config.threads = 3;
  run_experiment(config, b);
  const std::string summary = slurp(a / "summary.csv");
  std::size_t lines = 0;
  for (char ch : summary) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == 1 + 2 * 3);
  CHECK(summary == slurp(b / "summary.csv"));
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
}

TEST_CASE("summary csv renders failures with a blank rmse") {
  TrialRecord ok;
  ok.method = "tv";
  ok.tau = 0.5;
  ok.rmse_percent = 12.5;
  ok.iterations = 60;
  ok.termination = "iterate-change";
  TrialRecord bad;
  bad.trial = 1;
  bad.method = "tv";
  bad.tau = 0.5;
  bad.failed = true;
  bad.termination = "failed";
  std::ostringstream out;
  const std::vector<TrialRecord> records{ok, bad};
  write_summary_csv(out, records);
  CHECK(out.str() ==
        "trial,method,tau,rmse_percent,iterations,termination\n"
        "0,tv,0.5,12.5,60,iterate-change\n1,tv,0.5,,0,failed\n");
}

}
