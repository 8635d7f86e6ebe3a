#pragma once

// Special functions and adaptive Gauss-Kronrod quadrature with explicit error
// control. Everything here is pure and reentrant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "macroball/error.hpp"

namespace macroball {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
  int max_depth = 60;

  static constexpr double min_rel() { return 8.0 * std::numeric_limits<double>::epsilon(); }

  void validate() const {
    if (!(rel >= min_rel()))
      throw Error(ErrorKind::InvalidArgument,
                  "relative tolerance " + std::to_string(rel) + " is below 8 machine epsilons");
    if (!(abs >= 0.0)) throw Error(ErrorKind::InvalidArgument, "absolute tolerance must be >= 0");
    if (max_depth < 1) throw Error(ErrorKind::InvalidArgument, "max_depth must be >= 1");
  }
};

/// Result of a definite integral. When `log_space` is set, `value` holds the
/// logarithm of the integral and `abs_error` the absolute error of that
/// logarithm (i.e. the relative error of the integral).
struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::int64_t evaluations = 0;
  bool log_space = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
struct GK15 {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for the odd-indexed Kronrod nodes (xgk[1], xgk[3], xgk[5], xgk[7]).
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;

  bool operator<(const Panel& other) const {
    // Max-heap on error; ties broken by position for deterministic ordering.
    if (error != other.error) return error < other.error;
    return a > other.a;
  }
};

template <class F>
double checked_eval(F& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y))
    throw Error(ErrorKind::NonFinite, "integrand is not finite at x = " + std::to_string(x));
  return y;
}

template <class F>
Panel gk15_panel(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_eval(f, center);
  double kronrod = fc * GK15::wgk[7];
  double gauss = fc * GK15::wg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * GK15::xgk[j];
    const double sum = checked_eval(f, center - dx) + checked_eval(f, center + dx);
    kronrod += GK15::wgk[j] * sum;
    if (j % 2 == 1) gauss += GK15::wg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{a, b, kronrod, std::abs(kronrod - gauss), depth};
}

inline double error_target(const Tolerance& tol, double value) {
  return std::max(tol.abs, tol.rel * std::abs(value));
}

}  // namespace detail

/// Globally adaptive G7/K15 quadrature over the panels delimited by
/// `breakpoints` (sorted, first = a, last = b). The worst panel is bisected
/// until the summed |K15 - G7| estimate meets max(abs, rel * |value|).
/// Endpoint singularities are resolved by repeated bisection toward the
/// endpoint, bounded by `max_depth`.
template <class F>
QuadResult integrate_adaptive(F&& f, std::span<const double> breakpoints, const Tolerance& tol) {
  tol.validate();
  if (breakpoints.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] <= breakpoints[i]))
      throw Error(ErrorKind::InvalidArgument, "integration limits must satisfy a <= b");

  std::priority_queue<detail::Panel> heap;
  QuadResult out;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i - 1] == breakpoints[i]) continue;
    auto p = detail::gk15_panel(f, breakpoints[i - 1], breakpoints[i], 0);
    out.evaluations += 15;
    total += p.value;
    error += p.error;
    heap.push(p);
  }

  while (!heap.empty() && error > detail::error_target(tol, total)) {
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= tol.max_depth || mid <= worst.a || mid >= worst.b)
      throw Error(ErrorKind::DepthExceeded,
                  "error target unmet at depth " + std::to_string(worst.depth) + " near [" +
                      std::to_string(worst.a) + ", " + std::to_string(worst.b) + "]");
    heap.pop();
    auto left = detail::gk15_panel(f, worst.a, mid, worst.depth + 1);
    auto right = detail::gk15_panel(f, mid, worst.b, worst.depth + 1);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum in a fixed order so the result does not carry running-sum drift.
  std::vector<detail::Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
  out.value = 0.0;
  out.abs_error = 0.0;
  for (const auto& p : panels) {
    out.value += p.value;
    out.abs_error += p.error;
  }
  return out;
}

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const Tolerance& tol = {}) {
  const std::array<double, 2> ends = {a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(ends), tol);
}

/// log of the integral of exp(g) over [a, b], without overflow. g may return
/// -inf (zero contribution); NaN or +inf is an error.
template <class G>
QuadResult log_integrate_exp(G&& g, double a, double b, const Tolerance& tol = {}) {
  tol.validate();
  if (!(a <= b)) throw Error(ErrorKind::InvalidArgument, "integration limits must satisfy a <= b");
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (a == b) return QuadResult{neg_inf, 0.0, 0, true};

  constexpr int samples = 64;
  constexpr int max_reshift = 4;
  double shift = neg_inf;
  double peak = a;
  for (int i = 0; i <= samples; ++i) {
    const double x = (i == samples) ? b : a + (b - a) * i / samples;
    const double y = g(x);
    if (std::isnan(y) || y == std::numeric_limits<double>::infinity())
      throw Error(ErrorKind::NonFinite, "log-integrand is not finite at x = " + std::to_string(x));
    if (y > shift) {
      shift = y;
      peak = x;
    }
  }
  if (shift == neg_inf) return QuadResult{neg_inf, 0.0, samples + 1, true};

  // Panels graded geometrically toward the peak. A peak narrower than the
  // sampling grid shows up during integration as values above the shift; the
  // integration is then redone around the larger value.
  QuadResult r;
  for (int attempt = 0;; ++attempt) {
    std::vector<double> cuts = {a, b};
    double width = b - a;
    for (int k = 0; k < 30; ++k) {
      width *= 0.5;
      for (double c : {peak - width, peak + width})
        if (c > a && c < b) cuts.push_back(c);
    }
    if (peak > a && peak < b) cuts.push_back(peak);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Tolerance inner = tol;
    inner.abs = 0.0;
    double seen = shift;
    double seen_at = peak;
    auto shifted = [&](double x) {
      const double y = g(x);
      if (std::isnan(y) || y == std::numeric_limits<double>::infinity())
        throw Error(ErrorKind::NonFinite, "log-integrand is not finite at x = " + std::to_string(x));
      if (y > seen) {
        seen = y;
        seen_at = x;
      }
      if (y - shift > 600.0) return 0.0;  // redone below with a larger shift
      return y == neg_inf ? 0.0 : std::exp(y - shift);
    };
    r = integrate_adaptive(shifted, std::span<const double>(cuts), inner);
    if (seen <= shift + 1.0 || attempt == max_reshift) {
      if (seen - shift > 600.0) throw Error(ErrorKind::NonFinite, "log-integrand peak could not be located");
      break;
    }
    shift = seen;
    peak = seen_at;
  }
  QuadResult out;
  out.log_space = true;
  out.evaluations = r.evaluations + samples + 1;
  if (r.value <= 0.0) {
    out.value = neg_inf;
    out.abs_error = 0.0;
    return out;
  }
  out.value = shift + std::log(r.value);
  out.abs_error = r.abs_error / r.value;
  return out;
}

/// Gamma(m / 2) for a positive integer m, by exact recursion from
/// Gamma(1/2) = sqrt(pi) and Gamma(1) = 1.
inline double gamma_half_integer(int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "gamma_half_integer needs m >= 1");
  double x = (m % 2 == 0) ? 1.0 : 0.5;
  double g = (m % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  while (2.0 * x < m) {
    g *= x;
    x += 1.0;
  }
  return g;
}

/// Vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
inline double sphere_volume(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be >= 0");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / gamma_half_integer(k + 1);
}

namespace detail {

// Lambda(t) for 0 <= t <= pi/2 via
//   Lambda(t) = t - t log(2t) + sum_k zeta(2k) / (k (2k+1)) (t/pi)^{2k} t.
inline double lobachevsky_series(double t) {
  if (t == 0.0) return 0.0;
  const double q = (t / std::numbers::pi) * (t / std::numbers::pi);
  double sum = 0.0;
  double power = q;
  for (int k = 1; k < 200; ++k) {
    const double term = std::riemann_zeta(2.0 * k) / (k * (2.0 * k + 1.0)) * power;
    sum += term;
    if (term < 1e-17 * sum) break;
    power *= q;
  }
  return t - t * std::log(2.0 * t) + t * sum;
}

inline constexpr double lobachevsky_series_cut = 0.25;

}  // namespace detail

/// Lobachevsky function Lambda(theta) = -int_0^theta log|2 sin t| dt.
/// Odd and pi-periodic; the log singularity at 0 is handled by a series.
inline double lobachevsky(double theta, const Tolerance& tol = {}) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "theta must be finite");
  double t = theta - std::numbers::pi * std::round(theta / std::numbers::pi);
  double sign = 1.0;
  if (t < 0.0) {
    t = -t;
    sign = -1.0;
  }
  // t in [0, pi/2]
  if (t <= detail::lobachevsky_series_cut) return sign * detail::lobachevsky_series(t);
  const double head = detail::lobachevsky_series(detail::lobachevsky_series_cut);
  auto integrand = [](double s) { return std::log(2.0 * std::sin(s)); };
  const QuadResult tail = integrate_adaptive(integrand, detail::lobachevsky_series_cut, t, tol);
  return sign * (head - tail.value);
}

/// log(sinh t) for t >= 0, accurate for large t; -inf at t = 0.
inline double log_sinh(double t) {
  if (t > 20.0) return t - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * t));
  return std::log(std::sinh(t));
}

}  // namespace macroball
