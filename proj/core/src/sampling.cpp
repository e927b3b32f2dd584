#include "spiral/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace spiral {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t key) noexcept
    : base_(splitmix64(splitmix64(seed) ^ (key * 0xd1342543de82ef95ULL))) {}

std::uint64_t CounterRng::next() noexcept { return splitmix64(base_ + 0x632be59bd9b4e019ULL * ++counter_); }

double CounterRng::uniform() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t poisson_draw(double mean, CounterRng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::domain_error("poisson_draw: bad mean");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p == 0.0 && static_cast<double>(k) > mean) break;
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

PoissonSample sample_poisson(const LinearMap& system, const Signal& truth, double target_total,
                             std::uint64_t seed) {
  if (!(target_total > 0.0)) throw std::invalid_argument("sample_poisson: target_total must be positive");
  if (!truth.feasible()) throw std::domain_error("sample_poisson: truth must be nonnegative");
  PoissonSample out;
  out.mean = system.forward(truth.values());
  const double total = sum(out.mean);
  out.scale = total > 0.0 ? target_total / total : 1.0;
  for (double& m : out.mean) m *= out.scale;
  Vector scaled = truth.values();
  for (double& v : scaled) v *= out.scale;
  out.scaled_truth = truth.shape() ? Signal(std::move(scaled), *truth.shape()) : Signal(std::move(scaled));
  out.counts.resize(out.mean.size());
  for (std::size_t i = 0; i < out.mean.size(); ++i) {
    CounterRng rng(seed, i);
    out.counts[i] = static_cast<double>(poisson_draw(out.mean[i], rng));
  }
  return out;
}

}  // namespace spiral
