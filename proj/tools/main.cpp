#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spiral/denoisers.hpp"
#include "spiral/experiment.hpp"
#include "spiral/image_io.hpp"
#include "spiral/oracles.hpp"
#include "spiral/penalty.hpp"
#include "spiral/phantom.hpp"

namespace fs = std::filesystem;

namespace {

int run_command(const std::string& config_path, const std::string& out_dir, bool quiet) {
  const spiral::ExperimentConfig config = spiral::load_experiment_config(config_path);
  const spiral::ExperimentResult result =
      spiral::run_experiment(config, fs::path(out_dir), quiet ? nullptr : &std::cerr);
  spiral::write_summary_csv(std::cout, result.records);
  std::cerr << "total " << result.total_seconds << " s, outputs in " << out_dir << '\n';
  for (const auto& r : result.records) {
    if (r.failed) return 1;
  }
  return 0;
}

int denoise_command(const std::string& penalty, double kappa, const std::string& in,
                    const std::string& out, const std::string& wavelet) {
  const spiral::Signal s = spiral::read_image(in);
  spiral::SubConfig sub = spiral::SubConfig::tight();
  sub.wavelet = spiral::parse_wavelet_family(wavelet);
  auto solver = spiral::make_subproblem_solver(spiral::parse_penalty_kind(penalty), sub, s.size(),
                                               s.shape());
  const spiral::SubproblemSolution solution = solver->solve(s, kappa);
  spiral::write_image(out, solution.f);
  std::cout << "penalty " << solution.penalty << " inner_iterations "
            << solution.inner_iterations << '\n';
  return 0;
}

int phantom_command(std::size_t side, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const spiral::Phantom p = spiral::make_phantom(side);
  spiral::write_pgm(fs::path(out_dir) / "emission.pgm", p.emission);
  spiral::write_pgm(fs::path(out_dir) / "attenuation.pgm", p.attenuation);
  spiral::write_csv_image(fs::path(out_dir) / "emission.csv", p.emission);
  spiral::write_csv_image(fs::path(out_dir) / "attenuation.csv", p.attenuation);
  return 0;
}

int oracle_command(const std::string& suite, const std::string& out) {
  const auto reports = spiral::oracles::run_suite(suite);
  if (out.empty() || out == "-") {
    spiral::oracles::write_reports_csv(std::cout, reports);
  } else {
    std::ofstream file(out);
    spiral::oracles::write_reports_csv(file, reports);
  }
  std::size_t failed = 0;
  for (const auto& r : reports) failed += r.pass ? 0 : 1;
  std::cerr << reports.size() - failed << '/' << reports.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized Poisson image reconstruction"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "spiral_out";
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a reconstruction experiment");
  run->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_flag("--quiet", quiet, "No per-run progress on stderr");

  std::string penalty;
  double kappa = 0.0;
  std::string in_path;
  std::string out_path;
  std::string wavelet = "haar";
  auto* denoise = app.add_subcommand("denoise", "Solve one denoising subproblem");
  denoise->add_option("--penalty", penalty)
      ->required()
      ->check(CLI::IsMember({"l1", "l1w", "tv", "rdp", "rdp-ti"}));
  denoise->add_option("--kappa", kappa)->required()->check(CLI::NonNegativeNumber);
  denoise->add_option("--in", in_path, ".pgm or .csv input")->required()->check(CLI::ExistingFile);
  denoise->add_option("--out", out_path, ".pgm or .csv output")->required();
  denoise->add_option("--wavelet", wavelet, "haar, db4, db6 or db8 (l1w only)");

  std::size_t side = 64;
  std::string phantom_dir = ".";
  auto* phantom = app.add_subcommand("phantom", "Write the emission and attenuation phantoms");
  phantom->add_option("--side", side)->check(CLI::PositiveNumber);
  phantom->add_option("--out-dir", phantom_dir);

  std::string suite = "all";
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Run brute-force reference checks");
  oracle->add_option("--suite", suite)->check(CLI::IsMember(spiral::oracles::suite_names()));
  oracle->add_option("--out", oracle_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, out_dir, quiet);
    if (*denoise) return denoise_command(penalty, kappa, in_path, out_path, wavelet);
    if (*phantom) return phantom_command(side, phantom_dir);
    if (*oracle) return oracle_command(suite, oracle_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
