#include "spiral/difference.hpp"

#include <algorithm>
#include <stdexcept>

namespace spiral {

DifferenceOperator::DifferenceOperator(Shape shape, DifferenceDirection direction)
    : shape_(shape), direction_(direction) {
  if (shape.rows == 0 || shape.cols == 0) throw std::invalid_argument("DifferenceOperator: empty");
}

std::size_t DifferenceOperator::rows() const {
  return direction_ == DifferenceDirection::kHorizontal ? shape_.rows * (shape_.cols - 1)
                                                        : (shape_.rows - 1) * shape_.cols;
}

void DifferenceOperator::forward_impl(std::span<const double> x, std::span<double> out) const {
  const std::size_t nr = shape_.rows;
  const std::size_t nc = shape_.cols;
  if (direction_ == DifferenceDirection::kHorizontal) {
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t c = 0; c + 1 < nc; ++c) {
        out[r * (nc - 1) + c] = x[r * nc + c] - x[r * nc + c + 1];
      }
    }
  } else {
    for (std::size_t r = 0; r + 1 < nr; ++r) {
      for (std::size_t c = 0; c < nc; ++c) out[r * nc + c] = x[r * nc + c] - x[(r + 1) * nc + c];
    }
  }
}

void DifferenceOperator::adjoint_impl(std::span<const double> y, std::span<double> out) const {
  const std::size_t nr = shape_.rows;
  const std::size_t nc = shape_.cols;
  std::fill(out.begin(), out.end(), 0.0);
  if (direction_ == DifferenceDirection::kHorizontal) {
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t c = 0; c + 1 < nc; ++c) {
        const double v = y[r * (nc - 1) + c];
        out[r * nc + c] += v;
        out[r * nc + c + 1] -= v;
      }
    }
  } else {
    for (std::size_t r = 0; r + 1 < nr; ++r) {
      for (std::size_t c = 0; c < nc; ++c) {
        const double v = y[r * nc + c];
        out[r * nc + c] += v;
        out[(r + 1) * nc + c] -= v;
      }
    }
  }
}

StackedDifferenceOperator::StackedDifferenceOperator(Shape shape)
    : horizontal_(shape, DifferenceDirection::kHorizontal),
      vertical_(shape, DifferenceDirection::kVertical) {}

void StackedDifferenceOperator::forward_impl(std::span<const double> x,
                                             std::span<double> out) const {
  const std::size_t split = horizontal_.rows();
  horizontal_.apply(x, out.first(split));
  vertical_.apply(x, out.subspan(split));
}

void StackedDifferenceOperator::adjoint_impl(std::span<const double> y,
                                             std::span<double> out) const {
  const std::size_t split = horizontal_.rows();
  horizontal_.apply_adjoint(y.first(split), out);
  Vector tmp(out.size());
  vertical_.apply_adjoint(y.subspan(split), tmp);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
}

}  // namespace spiral
