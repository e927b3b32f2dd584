#pragma once

#include "spiral/linear_map.hpp"

namespace spiral {

enum class DifferenceDirection {
  kHorizontal,  // f(r, c) - f(r, c + 1), rows x (cols - 1) outputs
  kVertical,    // f(r, c) - f(r + 1, c), (rows - 1) x cols outputs
};

// First-order difference map on a row-major image.
class DifferenceOperator final : public LinearMap {
 public:
  DifferenceOperator(Shape shape, DifferenceDirection direction);

  std::size_t rows() const override;
  std::size_t cols() const override { return shape_.size(); }
  DifferenceDirection direction() const { return direction_; }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  Shape shape_;
  DifferenceDirection direction_;
};

// D = [D1; D2], horizontal differences first.
class StackedDifferenceOperator final : public LinearMap {
 public:
  explicit StackedDifferenceOperator(Shape shape);

  std::size_t rows() const override { return horizontal_.rows() + vertical_.rows(); }
  std::size_t cols() const override { return horizontal_.cols(); }
  const DifferenceOperator& horizontal() const { return horizontal_; }
  const DifferenceOperator& vertical() const { return vertical_; }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  DifferenceOperator horizontal_;
  DifferenceOperator vertical_;
};

}  // namespace spiral
