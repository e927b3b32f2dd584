#include "spiral/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spiral {

Signal::Signal(Vector values) : values_(std::move(values)) {}

Signal::Signal(Vector values, Shape shape) : values_(std::move(values)), shape_(shape) {
  if (shape.size() != values_.size()) {
    throw std::invalid_argument("Signal: shape " + std::to_string(shape.rows) + "x" +
                                std::to_string(shape.cols) + " does not match " +
                                std::to_string(values_.size()) + " values");
  }
}

Signal Signal::zeros(std::size_t n) { return Signal(Vector(n, 0.0)); }

Signal Signal::zeros(Shape shape) { return Signal(Vector(shape.size(), 0.0), shape); }

Signal Signal::constant(Shape shape, double value) {
  return Signal(Vector(shape.size(), value), shape);
}

Shape Signal::image_shape() const {
  if (!shape_) throw std::invalid_argument("Signal: no image shape attached");
  return *shape_;
}

double Signal::at(std::size_t row, std::size_t col) const {
  const Shape s = image_shape();
  if (row >= s.rows || col >= s.cols) throw std::out_of_range("Signal::at");
  return values_[row * s.cols + col];
}

bool Signal::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool Signal::feasible() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double sum(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v;
  return acc;
}

double max_value(std::span<const double> a) {
  if (a.empty()) return -std::numeric_limits<double>::infinity();
  return *std::max_element(a.begin(), a.end());
}

double min_value(std::span<const double> a) {
  if (a.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(a.begin(), a.end());
}

Vector difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("difference: size mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector positive_part(std::span<const double> x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("log2_exact: not a power of two");
  std::size_t p = 0;
  while ((std::size_t{1} << p) < n) ++p;
  return p;
}

void require_size(std::span<const double> a, std::size_t expected, const char* what) {
  if (a.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(expected) +
                                ", got " + std::to_string(a.size()));
  }
}

}  // namespace spiral
