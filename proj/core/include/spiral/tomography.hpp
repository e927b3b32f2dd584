#pragma once

#include <cstddef>
#include <memory>

#include "spiral/linear_map.hpp"
#include "spiral/signal.hpp"

namespace spiral {

struct ProjectorGeometry {
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::size_t n_angles = 60;
  double angle_span_degrees = 135.0;
  std::size_t n_radial = 64;
  // Strip width and detector spacing, in pixel units.
  double detector_spacing = 1.0;
};

// Parallel-beam strip-integral projector. Row (a, i) of the system matrix
// holds, for every pixel, the area of its intersection with the strip of
// detector bin i at angle a * span / n_angles. Pixels are unit squares
// centred on a grid whose origin is the image centre; bin i is centred at
// (i - (n_radial - 1) / 2) * spacing. Stored as CSR, rows ordered
// angle-major.
class StripProjector final : public LinearMap {
 public:
  explicit StripProjector(const ProjectorGeometry& geometry);

  std::size_t rows() const override { return row_offsets_.size() - 1; }
  std::size_t cols() const override { return geometry_.rows * geometry_.cols; }

  const ProjectorGeometry& geometry() const { return geometry_; }
  std::size_t nonzeros() const { return values_.size(); }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  ProjectorGeometry geometry_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  Vector values_;
};

// Attenuated emission model A = diag[exp(-R mu)] R.
struct TomographyModel {
  std::shared_ptr<const StripProjector> projector;
  Signal attenuation;
  Vector attenuation_weights;
  std::shared_ptr<const RowScaledMap> system;
};

// Requires rows == cols, n_angles >= 1, n_radial >= 1 and a nonnegative
// attenuation map of matching size. Deterministic for fixed inputs.
TomographyModel build_tomography(std::size_t rows, std::size_t cols, std::size_t n_angles,
                                 double angle_span_degrees, std::size_t n_radial,
                                 const Signal& attenuation);

// Area of a unit pixel whose centre projects to `centre` lying inside the
// strip [lo, hi] along a direction with |cos| = a, |sin| = b.
double pixel_strip_overlap(double centre, double lo, double hi, double a, double b);

}  // namespace spiral
