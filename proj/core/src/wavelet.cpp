#include "spiral/wavelet.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace spiral {

namespace {

constexpr std::array<double, 2> kHaar = {0.70710678118654757, 0.70710678118654757};
constexpr std::array<double, 4> kDaub4 = {0.48296291314453416, 0.83651630373780783,
                                          0.22414386804201342, -0.1294095225512604};
constexpr std::array<double, 6> kDaub6 = {0.33267055295008285,  0.80689150931109321,
                                          0.45987750211849154,  -0.13501102001025506,
                                          -0.08544127388202688, 0.035226291885709547};
constexpr std::array<double, 8> kDaub8 = {0.23037781330889609,   0.71484657055291456,
                                          0.63088076792985859,   -0.027983769416858782,
                                          -0.18703481171909231,  0.03084138183556067,
                                          0.032883011666885106,  -0.010597401785068999};

}  // namespace

WaveletFamily parse_wavelet_family(std::string_view name) {
  if (name == "haar" || name == "db2") return WaveletFamily::kHaar;
  if (name == "db4") return WaveletFamily::kDaubechies4;
  if (name == "db6") return WaveletFamily::kDaubechies6;
  if (name == "db8") return WaveletFamily::kDaubechies8;
  throw std::invalid_argument("unknown wavelet family '" + std::string(name) + "'");
}

std::string to_string(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::kHaar: return "haar";
    case WaveletFamily::kDaubechies4: return "db4";
    case WaveletFamily::kDaubechies6: return "db6";
    case WaveletFamily::kDaubechies8: return "db8";
  }
  return "unknown";
}

std::span<const double> scaling_filter(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::kHaar: return kHaar;
    case WaveletFamily::kDaubechies4: return kDaub4;
    case WaveletFamily::kDaubechies6: return kDaub6;
    case WaveletFamily::kDaubechies8: return kDaub8;
  }
  throw std::invalid_argument("scaling_filter: bad family");
}

OrthoBasis::OrthoBasis(WaveletFamily family, std::size_t length, std::size_t levels)
    : family_(family), shape_{1, length}, two_d_(false) {
  if (!is_power_of_two(length)) {
    throw std::invalid_argument("OrthoBasis: length must be a power of two");
  }
  const std::size_t max_levels = log2_exact(length);
  levels_ = levels == 0 ? max_levels : levels;
  if (levels_ > max_levels) throw std::invalid_argument("OrthoBasis: too many levels");
  const auto h = scaling_filter(family);
  lowpass_.assign(h.begin(), h.end());
  highpass_.resize(h.size());
  // g[k] = (-1)^k h[L-1-k]
  for (std::size_t k = 0; k < h.size(); ++k) {
    highpass_[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - k];
  }
}

OrthoBasis::OrthoBasis(WaveletFamily family, Shape shape, std::size_t levels)
    : OrthoBasis(family, shape.cols, 0) {
  if (!is_power_of_two(shape.rows) || !is_power_of_two(shape.cols)) {
    throw std::invalid_argument("OrthoBasis: image sides must be powers of two");
  }
  shape_ = shape;
  two_d_ = shape.rows > 1;
  const std::size_t max_levels = log2_exact(std::min(shape.rows, shape.cols));
  levels_ = levels == 0 ? max_levels : levels;
  if (two_d_ && levels_ > max_levels) throw std::invalid_argument("OrthoBasis: too many levels");
  if (!two_d_) {
    const std::size_t max_1d = log2_exact(shape.cols);
    levels_ = levels == 0 ? max_1d : levels;
    if (levels_ > max_1d) throw std::invalid_argument("OrthoBasis: too many levels");
  }
}

// One periodized analysis step on n samples read with `stride`: the first n/2
// outputs are approximation coefficients, the rest detail coefficients.
void OrthoBasis::forward_1d(double* data, std::size_t n, std::size_t stride,
                            double* scratch) const {
  const std::size_t half = n / 2;
  const std::size_t taps = lowpass_.size();
  for (std::size_t i = 0; i < half; ++i) {
    double approx = 0.0;
    double detail = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
      const double v = data[((2 * i + k) % n) * stride];
      approx += lowpass_[k] * v;
      detail += highpass_[k] * v;
    }
    scratch[i] = approx;
    scratch[half + i] = detail;
  }
  for (std::size_t i = 0; i < n; ++i) data[i * stride] = scratch[i];
}

void OrthoBasis::inverse_1d(double* data, std::size_t n, std::size_t stride,
                            double* scratch) const {
  const std::size_t half = n / 2;
  const std::size_t taps = lowpass_.size();
  std::fill(scratch, scratch + n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    const double approx = data[i * stride];
    const double detail = data[(half + i) * stride];
    for (std::size_t k = 0; k < taps; ++k) {
      scratch[(2 * i + k) % n] += lowpass_[k] * approx + highpass_[k] * detail;
    }
  }
  for (std::size_t i = 0; i < n; ++i) data[i * stride] = scratch[i];
}

void OrthoBasis::analysis(std::span<const double> f, std::span<double> out) const {
  require_size(f, size(), "OrthoBasis::analysis");
  if (out.size() != size()) throw std::invalid_argument("OrthoBasis::analysis: output size");
  std::copy(f.begin(), f.end(), out.begin());
  Vector scratch(std::max(shape_.rows, shape_.cols));
  double* data = out.data();
  if (!two_d_) {
    std::size_t n = shape_.cols;
    for (std::size_t level = 0; level < levels_; ++level, n /= 2) {
      forward_1d(data, n, 1, scratch.data());
    }
    return;
  }
  std::size_t nr = shape_.rows;
  std::size_t nc = shape_.cols;
  const std::size_t stride = shape_.cols;
  for (std::size_t level = 0; level < levels_; ++level, nr /= 2, nc /= 2) {
    for (std::size_t r = 0; r < nr; ++r) forward_1d(data + r * stride, nc, 1, scratch.data());
    for (std::size_t c = 0; c < nc; ++c) forward_1d(data + c, nr, stride, scratch.data());
  }
}

void OrthoBasis::synthesis(std::span<const double> theta, std::span<double> out) const {
  require_size(theta, size(), "OrthoBasis::synthesis");
  if (out.size() != size()) throw std::invalid_argument("OrthoBasis::synthesis: output size");
  std::copy(theta.begin(), theta.end(), out.begin());
  Vector scratch(std::max(shape_.rows, shape_.cols));
  double* data = out.data();
  if (!two_d_) {
    for (std::size_t level = levels_; level-- > 0;) {
      inverse_1d(data, shape_.cols >> level, 1, scratch.data());
    }
    return;
  }
  const std::size_t stride = shape_.cols;
  for (std::size_t level = levels_; level-- > 0;) {
    const std::size_t nr = shape_.rows >> level;
    const std::size_t nc = shape_.cols >> level;
    for (std::size_t c = 0; c < nc; ++c) inverse_1d(data + c, nr, stride, scratch.data());
    for (std::size_t r = 0; r < nr; ++r) inverse_1d(data + r * stride, nc, 1, scratch.data());
  }
}

Vector OrthoBasis::analysis(std::span<const double> f) const {
  Vector out(size());
  analysis(f, out);
  return out;
}

Vector OrthoBasis::synthesis(std::span<const double> theta) const {
  Vector out(size());
  synthesis(theta, out);
  return out;
}

}  // namespace spiral
