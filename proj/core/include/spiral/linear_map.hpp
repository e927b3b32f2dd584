#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>

#include "spiral/signal.hpp"

namespace spiral {

// Matrix-free linear operator y = M x with M of size rows() x cols().
// Implementations are immutable after construction and safe for concurrent
// read-only use.
class LinearMap {
 public:
  virtual ~LinearMap() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;

  // out = M x. Throws std::invalid_argument on dimension mismatch.
  void apply(std::span<const double> x, std::span<double> out) const;
  // out = M^T y.
  void apply_adjoint(std::span<const double> y, std::span<double> out) const;

  Vector forward(std::span<const double> x) const;
  Vector adjoint(std::span<const double> y) const;

 protected:
  virtual void forward_impl(std::span<const double> x, std::span<double> out) const = 0;
  virtual void adjoint_impl(std::span<const double> y, std::span<double> out) const = 0;
};

using LinearMapPtr = std::shared_ptr<const LinearMap>;

// Largest rows*cols product for which to_dense() will materialize a map.
inline constexpr std::size_t kMaxDenseEntries = std::size_t{1} << 22;

class DenseMatrix;

// Row-major dense materialization, obtained column by column from forward().
// Only meant for oracles and tests; throws std::length_error beyond
// kMaxDenseEntries entries.
DenseMatrix to_dense(const LinearMap& map);

class IdentityMap final : public LinearMap {
 public:
  explicit IdentityMap(std::size_t n) : n_(n) {}
  std::size_t rows() const override { return n_; }
  std::size_t cols() const override { return n_; }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  std::size_t n_;
};

class DenseMatrix final : public LinearMap {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  // `entries` is row-major with rows*cols values.
  DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Vector& entries() const { return entries_; }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Vector entries_;
};

// diag(weights) * inner
class RowScaledMap final : public LinearMap {
 public:
  RowScaledMap(Vector weights, LinearMapPtr inner);

  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }
  const Vector& weights() const { return weights_; }
  const LinearMap& inner() const { return *inner_; }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  Vector weights_;
  LinearMapPtr inner_;
};

// Forwards to an inner map while counting applications. The counters are the
// only mutable state and are atomic.
class CountingMap final : public LinearMap {
 public:
  explicit CountingMap(LinearMapPtr inner) : inner_(std::move(inner)) {}

  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }

  std::size_t forward_count() const { return forward_count_.load(); }
  std::size_t adjoint_count() const { return adjoint_count_.load(); }
  std::size_t total_count() const { return forward_count() + adjoint_count(); }
  void reset() const {
    forward_count_ = 0;
    adjoint_count_ = 0;
  }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override;
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override;

 private:
  LinearMapPtr inner_;
  mutable std::atomic<std::size_t> forward_count_{0};
  mutable std::atomic<std::size_t> adjoint_count_{0};
};

}  // namespace spiral
