#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spiral/denoisers.hpp"

namespace spiral {

namespace {

// Both difference fields of f, packed as in TvDual.
void differences(const Vector& f, std::size_t nr, std::size_t nc, Vector& dh, Vector& dv) {
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c + 1 < nc; ++c) dh[r * (nc - 1) + c] = f[r * nc + c] - f[r * nc + c + 1];
  }
  for (std::size_t r = 0; r + 1 < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) dv[r * nc + c] = f[r * nc + c] - f[(r + 1) * nc + c];
  }
}

// f = [s - kappa * D^T p]_+
void recover_primal(const Vector& s, double kappa, const Vector& ph, const Vector& pv,
                    std::size_t nr, std::size_t nc, Vector& f) {
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      double adj = 0.0;
      if (c + 1 < nc) adj += ph[r * (nc - 1) + c];
      if (c > 0) adj -= ph[r * (nc - 1) + c - 1];
      if (r + 1 < nr) adj += pv[r * nc + c];
      if (r > 0) adj -= pv[(r - 1) * nc + c];
      const double v = s[r * nc + c] - kappa * adj;
      f[r * nc + c] = v > 0.0 ? v : 0.0;
    }
  }
}

double abs_sum(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

double half_sq_distance(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return 0.5 * acc;
}

}  // namespace

double tv_seminorm(const Signal& f) {
  const Shape shape = f.image_shape();
  Vector dh(shape.rows * (shape.cols - 1));
  Vector dv((shape.rows - 1) * shape.cols);
  differences(f.values(), shape.rows, shape.cols, dh, dv);
  return abs_sum(dh) + abs_sum(dv);
}

double tv_objective(const Signal& f, const Signal& s, double kappa) {
  if (f.size() != s.size()) throw std::invalid_argument("tv_objective: size mismatch");
  return half_sq_distance(f.values(), s.values()) + kappa * tv_seminorm(f);
}

TvResult denoise_tv(const Signal& s, double kappa, const TvOptions& options, const TvDual* warm) {
  const Shape shape = s.image_shape();
  if (!shape.square()) throw std::invalid_argument("denoise_tv: image must be square");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("denoise_tv: kappa must be finite and >= 0");
  }
  const std::size_t nr = shape.rows;
  const std::size_t nc = shape.cols;
  const std::size_t nh = nr * (nc - 1);
  const std::size_t nv = (nr - 1) * nc;

  TvResult result;
  result.dual.horizontal.assign(nh, 0.0);
  result.dual.vertical.assign(nv, 0.0);
  const Vector& sv = s.values();
  Vector projected = positive_part(sv);
  result.f = Signal(projected, shape);
  result.objective = tv_objective(result.f, s, kappa);
  if (kappa == 0.0 || nr * nc <= 1) return result;

  if (warm != nullptr && warm->horizontal.size() == nh && warm->vertical.size() == nv) {
    for (std::size_t i = 0; i < nh; ++i) {
      result.dual.horizontal[i] = std::clamp(warm->horizontal[i], -1.0, 1.0);
    }
    for (std::size_t i = 0; i < nv; ++i) {
      result.dual.vertical[i] = std::clamp(warm->vertical[i], -1.0, 1.0);
    }
  }

  Vector& ph = result.dual.horizontal;
  Vector& pv = result.dual.vertical;
  Vector rh = ph;  // extrapolated point
  Vector rv = pv;
  Vector ph_prev(nh);
  Vector pv_prev(nv);
  Vector dh(nh);
  Vector dv(nv);
  Vector f(nr * nc);
  Vector f_prev = projected;
  Vector best_dual_h = ph;
  Vector best_dual_v = pv;
  double previous_objective = result.objective;
  double t = 1.0;
  // ||D||^2 <= 8 for the 2D first-difference operator.
  const double step = 1.0 / (8.0 * kappa);

  std::size_t iter = 0;
  for (iter = 1; iter <= options.max_iter; ++iter) {
    recover_primal(sv, kappa, rh, rv, nr, nc, f);
    differences(f, nr, nc, dh, dv);

    const double objective = half_sq_distance(f, sv) + kappa * (abs_sum(dh) + abs_sum(dv));
    if (objective < result.objective) {
      result.objective = objective;
      result.f.values() = f;
      best_dual_h = rh;
      best_dual_v = rv;
    }

    ph_prev.swap(ph);
    pv_prev.swap(pv);
    for (std::size_t i = 0; i < nh; ++i) ph[i] = std::clamp(rh[i] + step * dh[i], -1.0, 1.0);
    for (std::size_t i = 0; i < nv; ++i) pv[i] = std::clamp(rv[i] + step * dv[i], -1.0, 1.0);

    if (objective > previous_objective) {
      // Restart the momentum when the primal objective goes up.
      t = 1.0;
      rh = ph;
      rv = pv;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double momentum = (t - 1.0) / t_next;
      for (std::size_t i = 0; i < nh; ++i) rh[i] = ph[i] + momentum * (ph[i] - ph_prev[i]);
      for (std::size_t i = 0; i < nv; ++i) rv[i] = pv[i] + momentum * (pv[i] - pv_prev[i]);
      t = t_next;
    }
    previous_objective = objective;

    double change = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double d = f[i] - f_prev[i];
      change += d * d;
    }
    const double f_norm = norm2(f);
    const double relative = f_norm > 0.0 ? std::sqrt(change) / f_norm : std::sqrt(change);
    f_prev.swap(f);
    if (iter > 1 && iter >= options.min_iter && relative <= options.tol) break;
  }
  result.iterations = std::min(iter, options.max_iter);

  // Primal point of the last projected dual iterate.
  recover_primal(sv, kappa, ph, pv, nr, nc, f);
  differences(f, nr, nc, dh, dv);
  const double final_objective = half_sq_distance(f, sv) + kappa * (abs_sum(dh) + abs_sum(dv));
  if (final_objective <= result.objective) {
    result.objective = final_objective;
    result.f.values() = f;
  } else {
    ph = best_dual_h;
    pv = best_dual_v;
  }
  return result;
}

double tv_kkt_residual(const Signal& f, const Signal& s, double kappa, const TvDual& dual,
                       double zero_threshold) {
  const Shape shape = f.image_shape();
  const std::size_t nr = shape.rows;
  const std::size_t nc = shape.cols;
  Vector dh(nr * (nc - 1));
  Vector dv((nr - 1) * nc);
  differences(f.values(), nr, nc, dh, dv);
  Vector sh(dh.size());
  Vector svv(dv.size());
  auto select = [&](double d, double p) {
    if (d > zero_threshold) return 1.0;
    if (d < -zero_threshold) return -1.0;
    return std::clamp(p, -1.0, 1.0);
  };
  for (std::size_t i = 0; i < dh.size(); ++i) {
    sh[i] = select(dh[i], dual.horizontal.empty() ? 0.0 : dual.horizontal[i]);
  }
  for (std::size_t i = 0; i < dv.size(); ++i) {
    svv[i] = select(dv[i], dual.vertical.empty() ? 0.0 : dual.vertical[i]);
  }
  // g = f - s + kappa D^T sigma, with components at active bounds f_i = 0
  // reduced by the normal cone of the nonnegative orthant.
  double acc = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      double adj = 0.0;
      if (c + 1 < nc) adj += sh[r * (nc - 1) + c];
      if (c > 0) adj -= sh[r * (nc - 1) + c - 1];
      if (r + 1 < nr) adj += svv[r * nc + c];
      if (r > 0) adj -= svv[(r - 1) * nc + c];
      const std::size_t i = r * nc + c;
      double gi = f[i] - s[i] + kappa * adj;
      if (f[i] <= 0.0) gi = std::min(gi, 0.0);
      acc += gi * gi;
    }
  }
  return std::sqrt(acc);
}

}  // namespace spiral
