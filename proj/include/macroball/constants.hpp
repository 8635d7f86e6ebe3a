#pragma once

// Dimensional constants: C_n and alpha_n from sup f, c_n from the halved-ball
// ratio, the Croke-based c'''_n, lambda_n, beta_n, ideal simplex volumes, and
// the admissible-volume thresholds built from them.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "macroball/error.hpp"
#include "macroball/extremal.hpp"
#include "macroball/hypgeom.hpp"
#include "macroball/kernel.hpp"
#include "macroball/numerics.hpp"

namespace macroball {

/// Values the pipeline cannot derive: Croke's c'_n and V_n for n >= 4.
struct ExternalConstants {
  std::map<int, double> croke_cprime;
  std::map<int, double> ideal_simplex_vol_override;

  void validate() const {
    for (const auto* table : {&croke_cprime, &ideal_simplex_vol_override})
      for (const auto& [n, v] : *table) {
        if (n < 2) throw Error(ErrorKind::ConfigError, "external constant for dimension " + std::to_string(n) + " < 2");
        if (!(v > 0.0) || !std::isfinite(v))
          throw Error(ErrorKind::ConfigError, "external constant for dimension " + std::to_string(n) + " must be > 0");
      }
  }
};

struct PipelineOptions {
  Tolerance quad;
  RayOptions ray;
};

enum class Provenance { Computed, External, Clamped };

constexpr std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Computed: return "computed";
    case Provenance::External: return "external";
    case Provenance::Clamped: return "clamped";
  }
  return "computed";
}

// ---------------------------------------------------------------------------
// Tail bounds from (e^t/2)(1 - e^{-2t}) <= sinh t <= e^t/2, which give
//   K e^{(n-1)R} (1 - e^{-R})^{n-1} (1 - e^{-(n-1)R/2}) <= V_hyp(R) <= K e^{(n-1)R}
// with K = Vol(S^{n-1}) / (2^{n-1} (n-1)).

/// log K, the constant in V_hyp(R) ~ K e^{(n-1)R}.
inline double log_volume_asymptote(Dim dim) {
  const int n = dim.value();
  return std::log(sphere_volume(n - 1)) - (n - 1) * std::numbers::ln2 - std::log(n - 1.0);
}

/// Upper bound on sup_{r >= R} f(r).
inline double f_tail_upper(Dim dim, double R) {
  const double m = dim.value() - 1;
  const double eps = -m * std::log1p(-std::exp(-0.5 * R)) - std::log1p(-std::exp(-0.25 * m * R));
  return 2.0 * m + 4.0 * (std::numbers::ln2 + eps) / R;
}

/// Lower bound on inf_{r >= R} V(r)/V(r/2) e^{-(n-1)r/2}.
inline double g_tail_lower(Dim dim, double R) {
  const double m = dim.value() - 1;
  return std::exp(m * std::log1p(-std::exp(-R)) + std::log1p(-std::exp(-0.5 * m * R)));
}

/// Upper bound on sup_{r >= R} of the lambda_n integrand for a given log c'''_n.
inline double lambda_integrand_tail_upper(Dim dim, double log_c_triple_prime, double R) {
  const double m = dim.value() - 1;
  const double excess = std::max(0.0, log_volume_asymptote(dim) - log_c_triple_prime);
  return 2.0 + 2.0 * excess / (m * R);
}

// ---------------------------------------------------------------------------

/// g(R) = V(R)/V(R/2) e^{-(n-1)R/2}.
inline double halved_ratio_normalized(Dim dim, double R, const Tolerance& tol = {}) {
  return std::exp(log_v_ratio_halved(dim, R, tol) - 0.5 * (dim.value() - 1) * R);
}

/// (2/((n-1)R)) log(V_hyp(R) / c'''_n).
inline double lambda_integrand(Dim dim, double c_triple_prime, double R, const Tolerance& tol = {}) {
  if (!(c_triple_prime > 0.0)) throw Error(ErrorKind::InvalidArgument, "c''' must be > 0");
  const double m = dim.value() - 1;
  return 2.0 / (m * R) * (log_v_hyp(dim, R, tol) - std::log(c_triple_prime));
}

/// Maximal volume of an ideal n-simplex: pi for n = 2, 3 Lambda(pi/3) for
/// n = 3, the external override otherwise.
inline double ideal_simplex_volume(Dim dim, const ExternalConstants& ext, const Tolerance& tol = {}) {
  const int n = dim.value();
  if (n == 2) return std::numbers::pi;
  if (n == 3) return 3.0 * lobachevsky(std::numbers::pi / 3.0, tol);
  const auto it = ext.ideal_simplex_vol_override.find(n);
  if (it == ext.ideal_simplex_vol_override.end())
    throw Error(ErrorKind::MissingExternal, "ideal_simplex_vol_override[" + std::to_string(n) + "] is not configured");
  return it->second;
}

struct CAlpha {
  double C_n = 0.0;
  double alpha_n = 0.0;
  double log_C_n = 0.0;
  double log_alpha_n = 0.0;
  ExtremalResult f_sup;
};

/// C_n = (sup_{R >= 1} f(R))^n and alpha_n = 1 / (n! C_n).
inline CAlpha compute_C_alpha(Dim dim, const PipelineOptions& opt = {}) {
  const int n = dim.value();
  CAlpha out;
  out.f_sup = sup_on_ray([&](double R) { return f_of_R(dim, R, opt.quad); }, 1.0, 2.0 * (n - 1),
                         [&](double R) { return f_tail_upper(dim, R); }, opt.ray);
  out.log_C_n = n * std::log(out.f_sup.value);
  out.log_alpha_n = -std::lgamma(n + 1.0) - out.log_C_n;
  out.C_n = std::exp(out.log_C_n);
  out.alpha_n = std::exp(out.log_alpha_n);
  return out;
}

/// c_n = inf_{R >= 2} V(R)/V(R/2) e^{-(n-1)R/2}.
inline ExtremalResult compute_c_n(Dim dim, const PipelineOptions& opt = {}) {
  return inf_on_ray([&](double R) { return halved_ratio_normalized(dim, R, opt.quad); }, 2.0, 1.0,
                    [&](double R) { return g_tail_lower(dim, R); }, opt.ray);
}

struct LambdaN {
  double lambda_n = 0.0;
  bool clamped = false;
  ExtremalResult sup;
};

/// lambda_n = max(2, sup_{R >= 1} (2/((n-1)R)) log(V_hyp(R) / c'''_n)).
inline LambdaN compute_lambda_n(Dim dim, double c_triple_prime, const PipelineOptions& opt = {}) {
  if (!(c_triple_prime > 0.0) || !std::isfinite(c_triple_prime))
    throw Error(ErrorKind::InvalidArgument, "c''' must be finite and > 0");
  const double log_c3 = std::log(c_triple_prime);
  LambdaN out;
  out.sup = sup_on_ray([&](double R) { return lambda_integrand(dim, c_triple_prime, R, opt.quad); }, 1.0, 2.0,
                       [&](double R) { return lambda_integrand_tail_upper(dim, log_c3, R); }, opt.ray);
  out.clamped = out.sup.value < 2.0;
  out.lambda_n = std::max(out.sup.value, 2.0);
  return out;
}

struct ConstantsReport {
  int dim = 0;
  double V_n = 0.0;
  ExtremalResult f_sup;
  double C_n = 0.0;
  double alpha_n = 0.0;
  ExtremalResult c_n;
  double c_prime_n = 0.0;
  double c_triple_prime_n = 0.0;
  double lambda_n = 0.0;
  bool lambda_clamped = false;
  ExtremalResult lambda_sup;
  double beta_n = 0.0;
  double entropy_threshold_ratio = 0.0;
  double isoembolic_coefficient = 0.0;
  std::map<std::string, Provenance> provenance;
};

inline double require_croke(Dim dim, const ExternalConstants& ext) {
  const auto it = ext.croke_cprime.find(dim.value());
  if (it == ext.croke_cprime.end())
    throw Error(ErrorKind::MissingExternal, "croke_cprime[" + std::to_string(dim.value()) + "] is not configured");
  return it->second;
}

/// Runs alpha_n -> c_n -> c'''_n -> lambda_n -> beta_n.
inline ConstantsReport compute_beta_n(Dim dim, const ExternalConstants& ext, const PipelineOptions& opt = {}) {
  ext.validate();
  const int n = dim.value();
  const double V_n = ideal_simplex_volume(dim, ext, opt.quad);
  const double c_prime = require_croke(dim, ext);

  ConstantsReport r;
  r.dim = n;
  r.V_n = V_n;
  r.provenance["V_n"] = n <= 3 ? Provenance::Computed : Provenance::External;

  const CAlpha ca = compute_C_alpha(dim, opt);
  r.f_sup = ca.f_sup;
  r.C_n = ca.C_n;
  r.alpha_n = ca.alpha_n;
  r.provenance["f_sup"] = Provenance::Computed;
  r.provenance["C_n"] = Provenance::Computed;
  r.provenance["alpha_n"] = Provenance::Computed;

  r.c_n = compute_c_n(dim, opt);
  r.provenance["c_n"] = Provenance::Computed;
  r.c_prime_n = c_prime;
  r.provenance["c_prime_n"] = Provenance::External;
  r.c_triple_prime_n = r.c_n.value * c_prime * std::ldexp(1.0, -n);
  r.provenance["c_triple_prime_n"] = Provenance::Computed;

  const LambdaN ln = compute_lambda_n(dim, r.c_triple_prime_n, opt);
  r.lambda_n = ln.lambda_n;
  r.lambda_clamped = ln.clamped;
  r.lambda_sup = ln.sup;
  r.provenance["lambda_n"] = ln.clamped ? Provenance::Clamped : Provenance::Computed;

  r.beta_n = std::exp(ca.log_alpha_n - n * std::log(r.lambda_n) - std::log(V_n));
  r.provenance["beta_n"] = Provenance::Computed;
  r.entropy_threshold_ratio = r.alpha_n / V_n;
  r.isoembolic_coefficient = r.beta_n * V_n;
  r.provenance["entropy_threshold_ratio"] = Provenance::Computed;
  r.provenance["isoembolic_coefficient"] = Provenance::Computed;
  return r;
}

struct ThresholdReport {
  int dim = 0;
  double simplicial_volume = 0.0;
  bool simplicial_volume_derived = false;
  double theorem_threshold = 0.0;     // alpha_n ||M||
  double isoembolic_threshold = 0.0;  // beta_n V_n ||M||
  std::optional<double> corollary_threshold;  // beta_n vol(M, hyp)
  std::optional<double> entropy_threshold;    // (alpha_n / V_n) vol(M, hyp)
};

/// Admissible-volume thresholds for a manifold summarized by its hyperbolic
/// volume and/or simplicial volume. A missing simplicial volume is derived as
/// vol_hyp / V_n.
inline ThresholdReport volume_thresholds(const ConstantsReport& c, std::optional<double> vol_hyp,
                                         std::optional<double> simplicial_volume) {
  if (!vol_hyp && !simplicial_volume)
    throw Error(ErrorKind::MissingInput, "need a hyperbolic volume or a simplicial volume");
  if (vol_hyp && !(*vol_hyp > 0.0)) throw Error(ErrorKind::InvalidArgument, "hyperbolic volume must be > 0");
  if (simplicial_volume && !(*simplicial_volume > 0.0))
    throw Error(ErrorKind::InvalidArgument, "simplicial volume must be > 0");
  ThresholdReport t;
  t.dim = c.dim;
  t.simplicial_volume_derived = !simplicial_volume.has_value();
  t.simplicial_volume = simplicial_volume ? *simplicial_volume : *vol_hyp / c.V_n;
  t.theorem_threshold = c.alpha_n * t.simplicial_volume;
  t.isoembolic_threshold = c.beta_n * c.V_n * t.simplicial_volume;
  if (vol_hyp) {
    t.corollary_threshold = c.beta_n * *vol_hyp;
    t.entropy_threshold = c.entropy_threshold_ratio * *vol_hyp;
  }
  return t;
}

inline ThresholdReport volume_thresholds(Dim dim, const ExternalConstants& ext, std::optional<double> vol_hyp,
                                         std::optional<double> simplicial_volume, const PipelineOptions& opt = {}) {
  if (!vol_hyp && !simplicial_volume)
    throw Error(ErrorKind::MissingInput, "need a hyperbolic volume or a simplicial volume");
  return volume_thresholds(compute_beta_n(dim, ext, opt), vol_hyp, simplicial_volume);
}

}  // namespace macroball
