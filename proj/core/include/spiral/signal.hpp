#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace spiral {

using Vector = std::vector<double>;

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool square() const { return rows == cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

// A real-valued signal (intensity, photons per unit) with optional 2D shape.
// Images are stored row-major.
class Signal {
 public:
  Signal() = default;
  explicit Signal(Vector values);
  Signal(Vector values, Shape shape);

  static Signal zeros(std::size_t n);
  static Signal zeros(Shape shape);
  static Signal constant(Shape shape, double value);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  std::span<const double> span() const { return values_; }

  const std::optional<Shape>& shape() const { return shape_; }
  bool is_image() const { return shape_.has_value(); }
  // Throws when the signal carries no 2D shape.
  Shape image_shape() const;

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(std::size_t row, std::size_t col) const;

  bool all_finite() const;
  // Finite and componentwise nonnegative.
  bool feasible() const;

 private:
  Vector values_;
  std::optional<Shape> shape_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm2(std::span<const double> a);
double sum(std::span<const double> a);
double max_value(std::span<const double> a);
double min_value(std::span<const double> a);

// out = a - b
Vector difference(std::span<const double> a, std::span<const double> b);
// [x]_+ componentwise.
Vector positive_part(std::span<const double> x);

bool is_power_of_two(std::size_t n);
std::size_t log2_exact(std::size_t n);

// Throws std::invalid_argument with `what` when a.size() != b.
void require_size(std::span<const double> a, std::size_t expected, const char* what);

}  // namespace spiral
