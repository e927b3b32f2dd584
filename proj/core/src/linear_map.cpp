#include "spiral/linear_map.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace spiral {

void LinearMap::apply(std::span<const double> x, std::span<double> out) const {
  require_size(x, cols(), "LinearMap::apply input");
  if (out.size() != rows()) throw std::invalid_argument("LinearMap::apply: output size mismatch");
  forward_impl(x, out);
}

void LinearMap::apply_adjoint(std::span<const double> y, std::span<double> out) const {
  require_size(y, rows(), "LinearMap::apply_adjoint input");
  if (out.size() != cols()) {
    throw std::invalid_argument("LinearMap::apply_adjoint: output size mismatch");
  }
  adjoint_impl(y, out);
}

Vector LinearMap::forward(std::span<const double> x) const {
  Vector out(rows());
  apply(x, out);
  return out;
}

Vector LinearMap::adjoint(std::span<const double> y) const {
  Vector out(cols());
  apply_adjoint(y, out);
  return out;
}

DenseMatrix to_dense(const LinearMap& map) {
  const std::size_t m = map.rows();
  const std::size_t n = map.cols();
  if (m * n > kMaxDenseEntries) {
    throw std::length_error("to_dense: " + std::to_string(m) + "x" + std::to_string(n) +
                            " exceeds the dense materialization limit");
  }
  DenseMatrix dense(m, n);
  Vector e(n, 0.0);
  Vector column(m);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    map.apply(e, column);
    e[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) dense(i, j) = column[i];
  }
  return dense;
}

void IdentityMap::forward_impl(std::span<const double> x, std::span<double> out) const {
  std::copy(x.begin(), x.end(), out.begin());
}

void IdentityMap::adjoint_impl(std::span<const double> y, std::span<double> out) const {
  std::copy(y.begin(), y.end(), out.begin());
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) throw std::invalid_argument("DenseMatrix: entry count");
}

void DenseMatrix::forward_impl(std::span<const double> x, std::span<double> out) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = entries_.data() + r * cols_;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

void DenseMatrix::adjoint_impl(std::span<const double> y, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = entries_.data() + r * cols_;
    const double yr = y[r];
    for (std::size_t c = 0; c < cols_; ++c) out[c] += row[c] * yr;
  }
}

RowScaledMap::RowScaledMap(Vector weights, LinearMapPtr inner)
    : weights_(std::move(weights)), inner_(std::move(inner)) {
  if (!inner_) throw std::invalid_argument("RowScaledMap: null inner map");
  if (weights_.size() != inner_->rows()) throw std::invalid_argument("RowScaledMap: weight count");
}

void RowScaledMap::forward_impl(std::span<const double> x, std::span<double> out) const {
  inner_->apply(x, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= weights_[i];
}

void RowScaledMap::adjoint_impl(std::span<const double> y, std::span<double> out) const {
  Vector weighted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) weighted[i] = weights_[i] * y[i];
  inner_->apply_adjoint(weighted, out);
}

void CountingMap::forward_impl(std::span<const double> x, std::span<double> out) const {
  ++forward_count_;
  inner_->apply(x, out);
}

void CountingMap::adjoint_impl(std::span<const double> y, std::span<double> out) const {
  ++adjoint_count_;
  inner_->apply_adjoint(y, out);
}

}  // namespace spiral
