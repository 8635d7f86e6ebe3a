#pragma once

// Model-space geometry of H^n: geodesic ball volumes and the hyperboloid model.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "macroball/error.hpp"
#include "macroball/numerics.hpp"

namespace macroball {

/// Ambient dimension n >= 2.
class Dim {
 public:
  explicit Dim(int n) : n_(n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 2, got " + std::to_string(n));
  }
  int value() const { return n_; }
  friend bool operator==(Dim, Dim) = default;

 private:
  int n_;
};

namespace detail {
inline constexpr double small_radius_cut = 1e-4;
inline constexpr double log_double_max = 709.782712893384;

// int_0^R sinh^{m} t dt for tiny R, from
// sinh^m t = t^m (1 + m t^2/6 + (m/120 + m(m-1)/72) t^4 + O(t^6)).
inline double sinh_power_integral_series(int m, double R) {
  const double c2 = m / 6.0;
  const double c4 = m / 120.0 + m * (m - 1) / 72.0;
  const int n = m + 1;
  const double r2 = R * R;
  return std::pow(R, n) * (1.0 / n + c2 * r2 / (n + 2) + c4 * r2 * r2 / (n + 4));
}
}  // namespace detail

/// log V_hyp(n, R), valid for R up to 1e6. -inf at R = 0.
inline double log_v_hyp(Dim dim, double R, const Tolerance& tol = {}) {
  if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorKind::InvalidArgument, "radius must be finite and >= 0");
  const int n = dim.value();
  if (R == 0.0) return -std::numeric_limits<double>::infinity();
  const double log_sphere = std::log(sphere_volume(n - 1));
  if (R <= detail::small_radius_cut)
    return log_sphere + std::log(detail::sinh_power_integral_series(n - 1, R));
  const double m = n - 1;
  auto g = [m](double t) { return m * log_sinh(t); };
  return log_sphere + log_integrate_exp(g, 0.0, R, tol).value;
}

/// Volume of the geodesic R-ball in H^n. Throws Overflow when the volume is
/// not representable; use log_v_hyp there.
inline double v_hyp(Dim dim, double R, const Tolerance& tol = {}) {
  if (!(R >= 0.0) || !std::isfinite(R)) throw Error(ErrorKind::InvalidArgument, "radius must be finite and >= 0");
  const int n = dim.value();
  if (R == 0.0) return 0.0;
  if (R <= detail::small_radius_cut)
    return sphere_volume(n - 1) * detail::sinh_power_integral_series(n - 1, R);
  if ((n - 1) * R > 690.0) {
    const double lv = log_v_hyp(dim, R, tol);
    if (lv >= detail::log_double_max)
      throw Error(ErrorKind::Overflow, "V_hyp(" + std::to_string(n) + ", " + std::to_string(R) +
                                           ") exceeds the double range; use log_v_hyp");
    return std::exp(lv);
  }
  const int m = n - 1;
  auto integrand = [m](double t) { return std::pow(std::sinh(t), m); };
  Tolerance t = tol;
  t.abs = 0.0;
  return sphere_volume(m) * integrate_adaptive(integrand, 0.0, R, t).value;
}

/// log(V_hyp(R) / V_hyp(R/2)).
inline double log_v_ratio_halved(Dim dim, double R, const Tolerance& tol = {}) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0");
  return log_v_hyp(dim, R, tol) - log_v_hyp(dim, 0.5 * R, tol);
}

/// V_hyp(R) / V_hyp(R/2), evaluated in log space.
inline double v_ratio_halved(Dim dim, double R, const Tolerance& tol = {}) {
  return std::exp(log_v_ratio_halved(dim, R, tol));
}

/// Minkowski pairing x0 y0 - sum_i xi yi.
inline double minkowski(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "Minkowski pairing of vectors of different size");
  double s = x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s -= x[i] * y[i];
  return s;
}

/// A point of H^n in the hyperboloid model: <x,x> = 1, x0 >= 1.
class HPoint {
 public:
  static constexpr double tolerance = 1e-8;

  explicit HPoint(std::vector<double> coords) : x_(std::move(coords)) {
    if (x_.size() < 3) throw Error(ErrorKind::InvalidPoint, "hyperboloid point needs n + 1 >= 3 coordinates");
    for (double c : x_)
      if (!std::isfinite(c)) throw Error(ErrorKind::InvalidPoint, "non-finite coordinate");
    const double scale = std::max(1.0, x_[0] * x_[0]);
    const double q = minkowski(x_, x_);
    if (std::abs(q - 1.0) > tolerance * scale || x_[0] < 1.0 - tolerance)
      throw Error(ErrorKind::InvalidPoint, "point is off the upper hyperboloid sheet (<x,x> = " +
                                               std::to_string(q) + ")");
  }

  static HPoint origin(Dim dim) {
    std::vector<double> x(dim.value() + 1, 0.0);
    x[0] = 1.0;
    return HPoint(std::move(x));
  }

  int dim() const { return static_cast<int>(x_.size()) - 1; }
  std::span<const double> coords() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }

 private:
  std::vector<double> x_;
};

namespace detail {
// Geodesic distance between raw hyperboloid coordinates. Nearby points use
// 2 asinh(|p - q|_M / 2), which avoids the cancellation in acosh(<p,q>) near 1.
inline double distance_coords(std::span<const double> p, std::span<const double> q) {
  const double pairing = minkowski(p, q);
  if (pairing < 2.0) {
    double s = -(p[0] - q[0]) * (p[0] - q[0]);
    for (std::size_t i = 1; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, s)));
  }
  return std::acosh(pairing);
}
}  // namespace detail

inline double hdistance(const HPoint& p, const HPoint& q) {
  if (p.dim() != q.dim()) throw Error(ErrorKind::InvalidPoint, "points live in different dimensions");
  return detail::distance_coords(p.coords(), q.coords());
}

/// Projects an ambient vector onto the tangent space at p and normalizes it to
/// a unit spacelike vector.
inline std::vector<double> unit_tangent(const HPoint& p, std::span<const double> v) {
  if (v.size() != p.coords().size()) throw Error(ErrorKind::InvalidDirection, "direction has wrong size");
  const double along = minkowski(v, p.coords());
  std::vector<double> w(v.begin(), v.end());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= along * p[i];
  const double norm2 = -minkowski(w, w);
  if (!(norm2 > 1e-300)) throw Error(ErrorKind::InvalidDirection, "direction has no tangential component");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : w) c *= inv;
  return w;
}

/// cosh(t) p + sinh(t) direction, for a unit tangent `direction` at p.
inline HPoint geodesic_point(const HPoint& p, std::span<const double> direction, double t) {
  if (direction.size() != p.coords().size()) throw Error(ErrorKind::InvalidDirection, "direction has wrong size");
  const double scale = std::max(1.0, std::abs(p[0]));
  if (std::abs(minkowski(p.coords(), direction)) > HPoint::tolerance * scale)
    throw Error(ErrorKind::InvalidDirection, "direction is not Minkowski-orthogonal to the base point");
  if (std::abs(minkowski(direction, direction) + 1.0) > HPoint::tolerance * scale)
    throw Error(ErrorKind::InvalidDirection, "direction is not a unit spacelike vector");
  const double c = std::cosh(t);
  const double s = std::sinh(t);
  std::vector<double> x(direction.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = c * p[i] + s * direction[i];
  return HPoint(std::move(x));
}

}  // namespace macroball
