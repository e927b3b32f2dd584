#include "spiral/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spiral {

namespace {

struct Ellipse {
  double cx, cy, ax, ay, value;
  bool contains(double u, double v) const {
    const double du = (u - cx) / ax;
    const double dv = (v - cy) / ay;
    return du * du + dv * dv <= 1.0;
  }
};

// Later entries overwrite earlier ones.
constexpr Ellipse kRegions[] = {
    {0.0, 0.0, 0.85, 0.70, 1.0},     // body
    {-0.42, -0.08, 0.16, 0.22, 4.0}, // hot pair
    {0.42, -0.08, 0.16, 0.22, 4.0},
    {0.0, 0.38, 0.22, 0.12, 2.5},    // warm
    {0.0, -0.42, 0.12, 0.10, 0.0},   // cold lesion
};

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

Phantom make_phantom(std::size_t side) {
  if (side < 4) throw std::invalid_argument("make_phantom: side must be at least 4");
  const Shape shape{side, side};
  Vector emission(shape.size(), 0.0);
  Vector attenuation(shape.size(), 0.0);
  const double n = static_cast<double>(side);
  for (std::size_t r = 0; r < side; ++r) {
    // Pixel centres are symmetric about u = 0, so column c mirrors side-1-c.
    const double v = 1.0 - 2.0 * (static_cast<double>(r) + 0.5) / n;
    for (std::size_t c = 0; c < side; ++c) {
      const double u = 2.0 * (static_cast<double>(c) + 0.5) / n - 1.0;
      double value = 0.0;
      for (const Ellipse& e : kRegions) {
        if (e.contains(u, v)) value = e.value;
      }
      emission[r * side + c] = value;

      const double rho2 = (u / 0.9) * (u / 0.9) + (v / 0.75) * (v / 0.75);
      const double body = smoothstep((1.0 - rho2) / 0.15);
      const double du = std::abs(u) - 0.45;
      const double bumps = std::exp(-(du * du + v * v) / 0.05);
      attenuation[r * side + c] = 0.014 * body + 0.005 * bumps * body;
    }
  }
  return {Signal(std::move(emission), shape), Signal(std::move(attenuation), shape)};
}

}  // namespace spiral
