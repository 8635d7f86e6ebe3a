#pragma once

// Suprema and infima of continuous functions on rays [a, inf) whose limit at
// infinity is known, certified by a caller-supplied tail bound.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "macroball/error.hpp"

namespace macroball {

enum class ExtremumKind { Sup, Inf };

struct RayOptions {
  double tol = 1e-9;
  double max_ray_cut = 1e4;
  // Multiplies the number of grid points; the base step is 0.01 (1 + |a|).
  double grid_density = 1.0;

  double step(double a) const { return 0.01 * (1.0 + std::abs(a)) / grid_density; }
};

struct ExtremalResult {
  ExtremumKind kind = ExtremumKind::Sup;
  double value = 0.0;
  std::optional<double> arg;  // empty: approached at infinity
  double window_lo = 0.0;
  double window_hi = 0.0;  // R_cut
  double tail_margin = 0.0;
  long grid_points = 0;

  bool at_infinity() const { return !arg.has_value(); }
};

namespace detail {

// Golden-section maximization of f on [lo, hi]; returns (x, f(x)).
template <class F>
std::pair<double, double> golden_max(F& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

inline constexpr std::size_t max_refined_peaks = 16;

// Supremum with an upper tail bound: scan a uniform grid from a until the
// tail bound is dominated, then refine around the leading grid maxima.
template <class F, class T>
ExtremalResult sup_scan(F& f, double a, double limit, T& tail, const RayOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "extremal tolerance must be > 0");
  if (!(opt.grid_density > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid density must be > 0");
  const double h = opt.step(a);
  std::vector<double> values;
  double best = -std::numeric_limits<double>::infinity();
  double cut = a;
  double margin = 0.0;
  for (long i = 0;; ++i) {
    const double x = a + static_cast<double>(i) * h;
    if (x > opt.max_ray_cut)
      throw Error(ErrorKind::TailNeverDominates,
                  "tail bound not dominated before max_ray_cut = " + std::to_string(opt.max_ray_cut));
    const double v = f(x);
    if (std::isnan(v)) throw Error(ErrorKind::NonFinite, "objective is NaN at " + std::to_string(x));
    values.push_back(v);
    best = std::max(best, v);
    const double target = std::max(best, limit) + opt.tol;
    const double bound = tail(x);
    if (bound <= target) {
      cut = x;
      margin = target - bound;
      break;
    }
  }

  // Refine the highest grid-local maxima, then the smallest argument whose
  // refined value is within tol of the best refined value wins.
  const std::size_t m = values.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < m; ++i)
    if ((i == 0 || values[i] >= values[i - 1]) && (i + 1 == m || values[i] >= values[i + 1])) peaks.push_back(i);
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });
  if (peaks.size() > max_refined_peaks) peaks.resize(max_refined_peaks);

  std::vector<std::pair<double, double>> refined;  // (arg, value)
  for (std::size_t j : peaks) {
    const double xj = a + static_cast<double>(j) * h;
    std::pair<double, double> cand{xj, values[j]};
    const double lo = j == 0 ? a : xj - h;
    const double hi = std::min(cut, xj + h);
    if (hi > lo) {
      const auto g = golden_max(f, lo, hi);
      if (g.second > cand.second) cand = g;
    }
    refined.push_back(cand);
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& c : refined) top = std::max(top, c.second);
  std::pair<double, double> pick{std::numeric_limits<double>::infinity(), top};
  for (const auto& c : refined)
    if (c.second >= top - opt.tol && c.first < pick.first) pick = c;

  ExtremalResult r;
  r.kind = ExtremumKind::Sup;
  r.value = pick.second;
  r.arg = pick.first;
  if (limit > r.value) {
    r.value = limit;
    r.arg.reset();
  }
  r.window_lo = a;
  r.window_hi = cut;
  r.tail_margin = margin;
  r.grid_points = static_cast<long>(values.size());
  return r;
}

}  // namespace detail

/// Supremum of f on [a, inf). `limit` is the limit of f at infinity and
/// `tail_bound(R)` must bound sup_{r >= R} f(r) from above, tending to
/// `limit`. The scan stops at the first grid point R_cut with
/// tail_bound(R_cut) <= max(best, limit) + tol.
template <class F, class T>
ExtremalResult sup_on_ray(F&& f, double a, double limit, T&& tail_bound, const RayOptions& opt = {}) {
  return detail::sup_scan(f, a, limit, tail_bound, opt);
}

/// Infimum of f on [a, inf); mirror of sup_on_ray with a lower tail bound.
template <class F, class T>
ExtremalResult inf_on_ray(F&& f, double a, double limit, T&& tail_lower_bound, const RayOptions& opt = {}) {
  auto neg_f = [&f](double x) { return -f(x); };
  auto neg_tail = [&tail_lower_bound](double x) { return -tail_lower_bound(x); };
  ExtremalResult r = detail::sup_scan(neg_f, a, -limit, neg_tail, opt);
  r.kind = ExtremumKind::Inf;
  r.value = -r.value;
  return r;
}

}  // namespace macroball
