#pragma once

// The truncated exponential smoothing kernel
//   S_{lambda,R}(y) = (e^{-lambda d(y,y')} - e^{-lambda R}) 1_{B(y,R)}(y') dvol(y')
// on H^n: its weighted integral I(lambda, R), mass, derivative bound, the
// inequality chain leading to the 2 lambda bound, and a finite-difference
// total-variation check of the derivative bound in dimensions 2 and 3.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "macroball/error.hpp"
#include "macroball/hypgeom.hpp"
#include "macroball/numerics.hpp"

namespace macroball {

struct KernelParams {
  Dim dim;
  double lambda;
  double radius;

  KernelParams(Dim d, double lambda_, double radius_) : dim(d), lambda(lambda_), radius(radius_) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw Error(ErrorKind::InvalidArgument, "lambda must be finite and > 0");
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw Error(ErrorKind::InvalidArgument, "R must be finite and > 0");
  }
};

/// log I(lambda, R) = log( Vol(S^{n-1}) int_0^R e^{lambda (R - t)} sinh^{n-1} t dt ).
inline double log_kernel_I(const KernelParams& p, const Tolerance& tol = {}) {
  const double m = p.dim.value() - 1;
  const double lambda = p.lambda;
  const double R = p.radius;
  auto g = [=](double t) { return lambda * (R - t) + m * log_sinh(t); };
  return std::log(sphere_volume(p.dim.value() - 1)) + log_integrate_exp(g, 0.0, R, tol).value;
}

inline double kernel_I(const KernelParams& p, const Tolerance& tol = {}) {
  const double li = log_kernel_I(p, tol);
  if (li >= detail::log_double_max) throw Error(ErrorKind::Overflow, "I(lambda, R) exceeds the double range");
  return std::exp(li);
}

/// log of the kernel mass int_{B(R)} (e^{-lambda t} - e^{-lambda R}) dvol,
/// integrated directly so that no I - V_hyp subtraction is needed.
inline double log_kernel_mass(const KernelParams& p, const Tolerance& tol = {}) {
  const double m = p.dim.value() - 1;
  const double lambda = p.lambda;
  const double R = p.radius;
  auto g = [=](double t) {
    return -lambda * t + std::log(-std::expm1(-lambda * (R - t))) + m * log_sinh(t);
  };
  const double lm = std::log(sphere_volume(p.dim.value() - 1)) + log_integrate_exp(g, 0.0, R, tol).value;
  if (!std::isfinite(lm))
    throw Error(ErrorKind::DegenerateKernel, "kernel mass underflows (lambda R = " +
                                                 std::to_string(lambda * R) + " too small)");
  return lm;
}

inline double kernel_mass(const KernelParams& p, const Tolerance& tol = {}) {
  const double mass = std::exp(log_kernel_mass(p, tol));
  if (!(mass > 0.0)) throw Error(ErrorKind::DegenerateKernel, "kernel mass underflows to zero");
  return mass;
}

/// lambda I / (I - V_hyp(R)) = lambda I / (e^{lambda R} mass).
inline double deriv_bound(const KernelParams& p, const Tolerance& tol = {}) {
  return p.lambda * std::exp(log_kernel_I(p, tol) - p.lambda * p.radius - log_kernel_mass(p, tol));
}

/// Smallest lambda for which the chain yields the 2 lambda bound:
/// (2/R) log(2 V_hyp(R) / V_hyp(R/2)).
inline double lambda_min(Dim dim, double R, const Tolerance& tol = {}) {
  return (2.0 / R) * (std::numbers::ln2 + log_v_ratio_halved(dim, R, tol));
}

/// f(R) = (4/R) log(2 V_hyp(R) / V_hyp(R/2)).
inline double f_of_R(Dim dim, double R, const Tolerance& tol = {}) { return 2.0 * lambda_min(dim, R, tol); }

enum class Relation { GreaterEqual, Greater, LessEqual };

struct ChainEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::GreaterEqual;
  bool applicable = true;
  bool holds = false;
};

inline bool relation_holds(double lhs, Relation rel, double rhs) {
  switch (rel) {
    case Relation::GreaterEqual: return lhs >= rhs;
    case Relation::Greater: return lhs > rhs;
    case Relation::LessEqual: return lhs <= rhs;
  }
  return false;
}

struct ChainReport {
  explicit ChainReport(const KernelParams& kp) : params(kp) {}

  KernelParams params;
  double log_I = 0.0;
  double log_ball_vol = 0.0;
  double log_mass = 0.0;
  double I = 0.0;
  double ball_vol = 0.0;
  double mass = 0.0;
  double deriv_bound = 0.0;
  double lambda_min = 0.0;
  std::optional<bool> two_lambda_ok;  // empty when lambda < lambda_min
  std::vector<ChainEntry> chain_inequalities;

  bool all_hold() const {
    for (const auto& e : chain_inequalities)
      if (e.applicable && !e.holds) return false;
    return true;
  }
};

/// Relative slack on the upper-bound entries of the chain.
inline constexpr double chain_slack = 1e-9;

/// Evaluates each step of the chain
///   I >= e^{lambda R/2} V(R/2),
///   deriv_bound <= lambda A / (A - V(R))   where A = e^{lambda R/2} V(R/2) > V(R),
///   lambda A / (A - V(R)) <= 2 lambda      when lambda >= lambda_min,
/// and records each comparison. Log-scale entries compare logarithms.
inline ChainReport chain_check(const KernelParams& p, const Tolerance& tol = {}) {
  ChainReport rep(p);
  const double lambda = p.lambda;
  const double R = p.radius;
  rep.log_I = log_kernel_I(p, tol);
  rep.log_ball_vol = log_v_hyp(p.dim, R, tol);
  rep.log_mass = log_kernel_mass(p, tol);
  rep.I = std::exp(rep.log_I);
  rep.ball_vol = std::exp(rep.log_ball_vol);
  rep.mass = std::exp(rep.log_mass);
  rep.deriv_bound = lambda * std::exp(rep.log_I - lambda * R - rep.log_mass);
  rep.lambda_min = lambda_min(p.dim, R, tol);

  const double log_A = 0.5 * lambda * R + log_v_hyp(p.dim, 0.5 * R, tol);
  auto add = [&](std::string name, double lhs, Relation rel, double rhs, bool applicable) {
    ChainEntry e{std::move(name), lhs, rhs, rel, applicable, applicable && relation_holds(lhs, rel, rhs)};
    rep.chain_inequalities.push_back(e);
    return e.holds;
  };

  add("log I >= lambda R/2 + log V(R/2)", rep.log_I, Relation::GreaterEqual, log_A, true);
  const bool denominator_positive =
      add("lambda R/2 + log V(R/2) > log V(R)", log_A, Relation::Greater, rep.log_ball_vol, true);
  // lambda A / (A - V) = lambda / (1 - V/A)
  const double chain_bound =
      denominator_positive ? lambda / -std::expm1(rep.log_ball_vol - log_A) : std::numeric_limits<double>::infinity();
  add("deriv_bound <= lambda A/(A - V(R))", rep.deriv_bound, Relation::LessEqual, chain_bound * (1.0 + chain_slack),
      denominator_positive);
  const bool above_min = lambda >= rep.lambda_min;
  add("lambda A/(A - V(R)) <= 2 lambda", chain_bound, Relation::LessEqual, 2.0 * lambda * (1.0 + chain_slack),
      above_min);
  const bool two_lambda = add("deriv_bound <= 2 lambda", rep.deriv_bound, Relation::LessEqual,
                              2.0 * lambda * (1.0 + chain_slack), above_min);
  if (above_min) rep.two_lambda_ok = two_lambda;
  return rep;
}

struct TvResult {
  double value = 0.0;
  double abs_error = 0.0;
};

namespace detail {

// Radius along the ray at angle phi from the axis (measured at the midpoint)
// where the ball of radius R about a center at signed axial offset `offset`
// ends: cosh a cosh rho - sinh a cos(phi) sinh rho = cosh R.
inline double ball_exit_radius(double offset, double cos_phi, double R) {
  const double A = std::cosh(offset);
  const double B = std::sinh(offset) * cos_phi;
  const double C = std::cosh(R);
  const double x = (C + std::sqrt(std::max(0.0, C * C - (A * A - B * B)))) / (A - B);
  return std::log(x);
}

}  // namespace detail

inline constexpr Tolerance tv_default_tolerance{1e-9, 1e-13, 60};

/// Total variation distance between the normalized kernels centered at y and
/// y2, for n in {2, 3}. Integrated in geodesic polar coordinates about the
/// midpoint of [y, y2]; the rotation about the axis is integrated exactly.
inline TvResult tv_distance_detail(const KernelParams& p, const HPoint& y, const HPoint& y2,
                                   const Tolerance& tol = tv_default_tolerance) {
  const int n = p.dim.value();
  if (n != 2 && n != 3)
    throw Error(ErrorKind::UnsupportedDim, "tv_distance supports n in {2, 3}, got " + std::to_string(n));
  if (y.dim() != n || y2.dim() != n) throw Error(ErrorKind::InvalidPoint, "centers must live in H^n");
  const double delta = hdistance(y, y2);
  const double R = p.radius;
  if (delta == 0.0) return {0.0, 0.0};
  if (delta >= 2.0 * R) return {2.0, 0.0};

  // Frame at the midpoint: e1 toward y, e2 orthogonal to the axis.
  const double a = 0.5 * delta;
  const std::vector<double> u = unit_tangent(y, y2.coords());
  const HPoint mid = geodesic_point(y, u, a);
  std::vector<double> back(u.size());
  for (std::size_t i = 0; i < back.size(); ++i) back[i] = -(std::sinh(a) * y[i] + std::cosh(a) * u[i]);
  const std::vector<double> e1 = unit_tangent(mid, back);
  std::vector<double> e2;
  double best = -1.0;
  for (int k = 1; k <= n; ++k) {
    std::vector<double> w(n + 1, 0.0);
    w[k] = 1.0;
    const double wm = minkowski(w, mid.coords());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= wm * mid[i];
    const double we = minkowski(w, e1);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += we * e1[i];
    const double norm2 = -minkowski(w, w);
    if (norm2 > best) {
      best = norm2;
      for (double& c : w) c /= std::sqrt(norm2);
      e2 = std::move(w);
    }
  }

  const double lambda = p.lambda;
  const double cutoff = std::exp(-lambda * R);
  const double mass = kernel_mass(p);
  const int m = n - 1;

  double worst_inner_error = 0.0;
  auto inner = [&](double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    std::vector<double> z(n + 1);
    auto point = [&](double rho) {
      const double ch = std::cosh(rho);
      const double sh = std::sinh(rho);
      for (int i = 0; i <= n; ++i) z[i] = ch * mid[i] + sh * (c * e1[i] + s * e2[i]);
    };
    const double rho_far = detail::ball_exit_radius(a, c, R);    // exit of B(y, R)
    const double rho_near = detail::ball_exit_radius(-a, c, R);  // exit of B(y2, R)
    auto both = [&](double rho) {
      point(rho);
      const double d1 = detail::distance_coords(z, y.coords());
      const double d2 = detail::distance_coords(z, y2.coords());
      return (std::exp(-lambda * d1) - std::exp(-lambda * d2)) * std::pow(std::sinh(rho), m);
    };
    auto only_y = [&](double rho) {
      point(rho);
      const double d1 = detail::distance_coords(z, y.coords());
      return std::max(0.0, std::exp(-lambda * d1) - cutoff) * std::pow(std::sinh(rho), m);
    };
    // Closest approach of the ray to y, where d(., y) has its sharpest bend.
    const double rho_closest = std::atanh(std::tanh(a) * c);
    std::vector<double> cuts = {0.0};
    if (rho_closest > 0.0 && rho_closest < rho_near) cuts.push_back(rho_closest);
    cuts.push_back(rho_near);
    QuadResult q1 = integrate_adaptive(both, std::span<const double>(cuts), tol);
    QuadResult q2 = integrate_adaptive(only_y, rho_near, rho_far, tol);
    worst_inner_error = std::max(worst_inner_error, q1.abs_error + q2.abs_error);
    return (q1.value + q2.value) / mass;
  };

  const double factor = (n == 2) ? 2.0 * 2.0 : 2.0 * 2.0 * std::numbers::pi;
  auto outer = [&](double phi) { return (n == 2 ? 1.0 : std::sin(phi)) * inner(phi); };
  const QuadResult q = integrate_adaptive(outer, 0.0, 0.5 * std::numbers::pi, tol);
  TvResult r;
  r.value = factor * q.value;
  r.abs_error = factor * (q.abs_error + 0.5 * std::numbers::pi * worst_inner_error / mass);
  return r;
}

inline double tv_distance(const KernelParams& p, const HPoint& y, const HPoint& y2,
                          const Tolerance& tol = tv_default_tolerance) {
  return tv_distance_detail(p, y, y2, tol).value;
}

struct FdCheck {
  double fd_norm_rate = 0.0;
  double bound = 0.0;
  double tv = 0.0;
  double tv_error = 0.0;
  bool holds = false;
};

/// Slack applied to the derivative bound in fd_derivative_check.
inline constexpr double fd_slack = 0.05;

/// TV distance between kernels at centers h apart, divided by h, compared
/// against deriv_bound(p) with 5% slack plus the quadrature error.
inline FdCheck fd_derivative_check(const KernelParams& p, double h, const Tolerance& tol = tv_default_tolerance) {
  if (!(h > 0.0 && h <= 1e-2)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be in (0, 1e-2]");
  const int n = p.dim.value();
  if (n != 2 && n != 3)
    throw Error(ErrorKind::UnsupportedDim, "finite-difference check supports n in {2, 3}, got " + std::to_string(n));
  const HPoint y = HPoint::origin(p.dim);
  std::vector<double> dir(n + 1, 0.0);
  dir[1] = 1.0;
  const HPoint y2 = geodesic_point(y, dir, h);
  const TvResult tv = tv_distance_detail(p, y, y2, tol);
  FdCheck out;
  out.tv = tv.value;
  out.tv_error = tv.abs_error;
  out.fd_norm_rate = tv.value / h;
  out.bound = deriv_bound(p);
  out.holds = out.fd_norm_rate <= out.bound * (1.0 + fd_slack) + tv.abs_error / h;
  return out;
}

}  // namespace macroball
