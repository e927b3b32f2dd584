#include "spiral/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spiral {

namespace {

constexpr double kDegenerateWidth = 1e-12;

double ramp_squared(double x) { return x > 0.0 ? 0.5 * x * x : 0.0; }

// CDF of u*a + v*b with u, v independent uniform on [-1/2, 1/2]: the
// projected-coordinate distribution of a point drawn uniformly from a unit
// pixel.
double projected_pixel_cdf(double z, double a, double b) {
  if (a < b) std::swap(a, b);
  if (b < kDegenerateWidth) {
    if (a < kDegenerateWidth) return z >= 0.0 ? 1.0 : 0.0;
    return std::clamp((z + 0.5 * a) / a, 0.0, 1.0);
  }
  const double outer = 0.5 * (a + b);
  const double inner = 0.5 * (a - b);
  if (z <= -outer) return 0.0;
  if (z >= outer) return 1.0;
  const double value = ramp_squared(z + outer) - ramp_squared(z + inner) -
                       ramp_squared(z - inner) + ramp_squared(z - outer);
  return std::clamp(value / (a * b), 0.0, 1.0);
}

}  // namespace

double pixel_strip_overlap(double centre, double lo, double hi, double a, double b) {
  return projected_pixel_cdf(hi - centre, a, b) - projected_pixel_cdf(lo - centre, a, b);
}

StripProjector::StripProjector(const ProjectorGeometry& geometry) : geometry_(geometry) {
  if (geometry.rows == 0 || geometry.cols == 0) {
    throw std::invalid_argument("StripProjector: empty image");
  }
  if (geometry.n_angles == 0 || geometry.n_radial == 0) {
    throw std::invalid_argument("StripProjector: need at least one angle and one radial bin");
  }
  if (!(geometry.detector_spacing > 0.0)) {
    throw std::invalid_argument("StripProjector: detector spacing must be positive");
  }

  const std::size_t n_rows = geometry.n_angles * geometry.n_radial;
  const double spacing = geometry.detector_spacing;
  const double first_centre = -0.5 * static_cast<double>(geometry.n_radial - 1) * spacing;
  const double x0 = -0.5 * static_cast<double>(geometry.cols - 1);
  const double y0 = 0.5 * static_cast<double>(geometry.rows - 1);

  std::vector<std::vector<std::pair<std::size_t, double>>> bins(n_rows);
  for (std::size_t a = 0; a < geometry.n_angles; ++a) {
    const double angle = geometry.angle_span_degrees * std::numbers::pi / 180.0 *
                         static_cast<double>(a) / static_cast<double>(geometry.n_angles);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double wa = std::abs(c);
    const double wb = std::abs(s);
    const double half_extent = 0.5 * (wa + wb);
    for (std::size_t r = 0; r < geometry.rows; ++r) {
      const double y = y0 - static_cast<double>(r);
      for (std::size_t col = 0; col < geometry.cols; ++col) {
        const double x = x0 + static_cast<double>(col);
        const double t = x * c + y * s;
        // Bins whose strips may intersect [t - half_extent, t + half_extent].
        const double lo_index = (t - half_extent - first_centre) / spacing - 0.5;
        const double hi_index = (t + half_extent - first_centre) / spacing + 0.5;
        const long first = std::max(0L, static_cast<long>(std::floor(lo_index)));
        const long last = std::min(static_cast<long>(geometry.n_radial) - 1,
                                   static_cast<long>(std::ceil(hi_index)));
        for (long i = first; i <= last; ++i) {
          const double centre = first_centre + static_cast<double>(i) * spacing;
          const double area =
              pixel_strip_overlap(t, centre - 0.5 * spacing, centre + 0.5 * spacing, wa, wb);
          if (area > 0.0) {
            bins[a * geometry.n_radial + static_cast<std::size_t>(i)].emplace_back(
                r * geometry.cols + col, area);
          }
        }
      }
    }
  }

  row_offsets_.assign(n_rows + 1, 0);
  for (std::size_t i = 0; i < n_rows; ++i) row_offsets_[i + 1] = row_offsets_[i] + bins[i].size();
  col_indices_.reserve(row_offsets_.back());
  values_.reserve(row_offsets_.back());
  for (const auto& bin : bins) {
    for (const auto& [pixel, area] : bin) {
      col_indices_.push_back(pixel);
      values_.push_back(area);
    }
  }
}

void StripProjector::forward_impl(std::span<const double> x, std::span<double> out) const {
  const std::size_t m = rows();
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      acc += values_[k] * x[col_indices_[k]];
    }
    out[i] = acc;
  }
}

void StripProjector::adjoint_impl(std::span<const double> y, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t m = rows();
  for (std::size_t i = 0; i < m; ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      out[col_indices_[k]] += values_[k] * yi;
    }
  }
}

TomographyModel build_tomography(std::size_t rows, std::size_t cols, std::size_t n_angles,
                                 double angle_span_degrees, std::size_t n_radial,
                                 const Signal& attenuation) {
  if (rows != cols) throw std::invalid_argument("build_tomography: image must be square");
  if (attenuation.size() != rows * cols) {
    throw std::invalid_argument("build_tomography: attenuation map size mismatch");
  }
  if (!attenuation.feasible()) {
    throw std::invalid_argument("build_tomography: attenuation must be finite and nonnegative");
  }

  ProjectorGeometry geometry;
  geometry.rows = rows;
  geometry.cols = cols;
  geometry.n_angles = n_angles;
  geometry.angle_span_degrees = angle_span_degrees;
  geometry.n_radial = n_radial;

  TomographyModel model;
  model.projector = std::make_shared<const StripProjector>(geometry);
  model.attenuation = Signal(attenuation.values(), Shape{rows, cols});
  const Vector line_integrals = model.projector->forward(attenuation.values());
  model.attenuation_weights.resize(line_integrals.size());
  for (std::size_t i = 0; i < line_integrals.size(); ++i) {
    model.attenuation_weights[i] = std::exp(-line_integrals[i]);
  }
  model.system = std::make_shared<const RowScaledMap>(model.attenuation_weights, model.projector);
  return model;
}

}  // namespace spiral
