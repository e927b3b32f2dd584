#include <benchmark/benchmark.h>

#include <random>

#include "spiral/denoisers.hpp"
#include "spiral/phantom.hpp"
#include "spiral/poisson.hpp"
#include "spiral/sampling.hpp"
#include "spiral/solver.hpp"
#include "spiral/tomography.hpp"
#include "spiral/wavelet.hpp"

using namespace spiral;

namespace {

Vector noisy(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.5, 0.5);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

const TomographyModel& model64() {
  static const TomographyModel tomo = [] {
    const Phantom p = make_phantom(64);
    return build_tomography(64, 64, 60, 135.0, 64, p.attenuation);
  }();
  return tomo;
}

void BM_ProjectorForward(benchmark::State& state) {
  const auto& tomo = model64();
  const Vector f = noisy(64 * 64, 1);
  Vector out(tomo.system->rows());
  for (auto _ : state) {
    tomo.system->apply(f, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProjectorForward);

void BM_ProjectorAdjoint(benchmark::State& state) {
  const auto& tomo = model64();
  const Vector y = noisy(tomo.system->rows(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(tomo.system->adjoint(y));
}
BENCHMARK(BM_ProjectorAdjoint);

void BM_WaveletRoundTrip(benchmark::State& state) {
  const auto family = static_cast<WaveletFamily>(state.range(0));
  const OrthoBasis basis(family, Shape{64, 64});
  const Vector f = noisy(64 * 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(basis.synthesis(basis.analysis(f)));
}
BENCHMARK(BM_WaveletRoundTrip)
    ->Arg(static_cast<int>(WaveletFamily::kHaar))
    ->Arg(static_cast<int>(WaveletFamily::kDaubechies6));

void BM_DenoiseTv(benchmark::State& state) {
  const Signal s(noisy(64 * 64, 4), Shape{64, 64});
  TvOptions options;
  options.max_iter = static_cast<std::size_t>(state.range(0));
  options.tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(denoise_tv(s, 0.1, options));
}
BENCHMARK(BM_DenoiseTv)->Arg(10)->Arg(100);

void BM_DenoiseL1Dual(benchmark::State& state) {
  const OrthoBasis basis(WaveletFamily::kHaar, Shape{64, 64});
  const Vector s = basis.analysis(noisy(64 * 64, 5));
  L1DualOptions options;
  options.max_iter = 10;
  for (auto _ : state) benchmark::DoNotOptimize(denoise_l1_dual(s, 0.1, basis, options));
}
BENCHMARK(BM_DenoiseL1Dual);

void BM_RdpFit(benchmark::State& state) {
  const Signal s(noisy(64 * 64, 6), Shape{64, 64});
  for (auto _ : state) benchmark::DoNotOptimize(rdp_fit(s, 0.1));
}
BENCHMARK(BM_RdpFit);

void BM_RdpTiFit(benchmark::State& state) {
  const Signal s(noisy(64 * 64, 7), Shape{64, 64});
  const auto shifts = shift_grid(64, 8);
  for (auto _ : state) benchmark::DoNotOptimize(rdp_ti_fit(s, 0.1, shifts));
}
BENCHMARK(BM_RdpTiFit)->Unit(benchmark::kMillisecond);

void BM_SolverIterations(benchmark::State& state) {
  const auto& tomo = model64();
  const Phantom p = make_phantom(64);
  const PoissonSample sample = sample_poisson(*tomo.system, p.emission, 2e5, 9);
  const PoissonModel model(tomo.system, sample.counts);
  SolverConfig config;
  config.tau = 0.5;
  config.penalty = static_cast<PenaltyKind>(state.range(0));
  config.stop_on_iterate_change = false;
  config.stop_on_objective_change = false;
  config.min_iter = 20;
  config.max_iter = 20;
  const Signal f0 = Signal::constant(Shape{64, 64}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run(model, config, f0));
}
BENCHMARK(BM_SolverIterations)
    ->Arg(static_cast<int>(PenaltyKind::kWaveletL1))
    ->Arg(static_cast<int>(PenaltyKind::kTotalVariation))
    ->Arg(static_cast<int>(PenaltyKind::kRdp))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
