#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "spiral/linear_map.hpp"
#include "spiral/signal.hpp"

namespace spiral {

// Orthonormal Daubechies families, named by filter length (Haar has two taps,
// Daubechies6 has six taps and three vanishing moments).
enum class WaveletFamily { kHaar, kDaubechies4, kDaubechies6, kDaubechies8 };

WaveletFamily parse_wavelet_family(std::string_view name);
std::string to_string(WaveletFamily family);

// Scaling (lowpass) filter coefficients, summing to sqrt(2).
std::span<const double> scaling_filter(WaveletFamily family);

// Periodized orthonormal wavelet basis W on 1D signals of length 2^p or 2D
// images of size 2^p x 2^q. analysis() computes W^T f; synthesis() computes W theta.
// Coefficients are stored in Mallat order: the coarsest approximation first,
// detail bands following from coarse to fine.
class OrthoBasis {
 public:
  // levels == 0 selects the full decomposition.
  OrthoBasis(WaveletFamily family, std::size_t length, std::size_t levels = 0);
  OrthoBasis(WaveletFamily family, Shape shape, std::size_t levels = 0);

  WaveletFamily family() const { return family_; }
  std::size_t size() const { return shape_.size(); }
  std::size_t levels() const { return levels_; }
  bool is_2d() const { return two_d_; }
  Shape shape() const { return shape_; }

  Vector analysis(std::span<const double> f) const;
  Vector synthesis(std::span<const double> theta) const;

  void analysis(std::span<const double> f, std::span<double> out) const;
  void synthesis(std::span<const double> theta, std::span<double> out) const;

 private:
  void forward_1d(double* data, std::size_t n, std::size_t stride, double* scratch) const;
  void inverse_1d(double* data, std::size_t n, std::size_t stride, double* scratch) const;

  WaveletFamily family_;
  Shape shape_;
  bool two_d_;
  std::size_t levels_;
  Vector lowpass_;
  Vector highpass_;
};

// W viewed as a LinearMap: forward is synthesis, adjoint is analysis.
class WaveletSynthesisMap final : public LinearMap {
 public:
  explicit WaveletSynthesisMap(OrthoBasis basis) : basis_(std::move(basis)) {}
  std::size_t rows() const override { return basis_.size(); }
  std::size_t cols() const override { return basis_.size(); }
  const OrthoBasis& basis() const { return basis_; }

 protected:
  void forward_impl(std::span<const double> x, std::span<double> out) const override {
    basis_.synthesis(x, out);
  }
  void adjoint_impl(std::span<const double> y, std::span<double> out) const override {
    basis_.analysis(y, out);
  }

 private:
  OrthoBasis basis_;
};

}  // namespace spiral
