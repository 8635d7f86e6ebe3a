#pragma once

// The verification suite: one check per certified property, run against a
// configuration and gathered in a fixed order.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "macroball/config.hpp"
#include "macroball/constants.hpp"
#include "macroball/json_writer.hpp"
#include "macroball/kernel.hpp"
#include "macroball/report.hpp"

namespace macroball {

enum class CheckStatus { Pass, Fail, Skipped };

constexpr std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "fail";
}

struct CheckOutcome {
  std::string id;
  std::string suite;
  std::string description;
  std::string anchor;
  CheckStatus status = CheckStatus::Fail;
  double lhs = 0.0;     // observed worst-case quantity
  double rhs = 0.0;     // bound it is held against
  double margin = 0.0;  // positive when the check passes with room
  std::string note;
};

inline CheckOutcome make_outcome(std::string id, std::string suite, std::string description, std::string anchor) {
  CheckOutcome c;
  c.id = std::move(id);
  c.suite = std::move(suite);
  c.description = std::move(description);
  c.anchor = std::move(anchor);
  return c;
}

struct VerificationOutcome {
  std::string suite;
  std::vector<CheckOutcome> checks;

  int count(CheckStatus s) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const auto& c) { return c.status == s; }));
  }
  int exit_code() const { return count(CheckStatus::Fail) == 0 ? 0 : 1; }
};

inline Json verification_json(const VerificationOutcome& v) {
  Json j;
  j["suite"] = v.suite;
  Json checks = Json::array();
  for (const auto& c : v.checks) {
    Json e;
    e["id"] = c.id;
    e["suite"] = c.suite;
    e["description"] = c.description;
    e["anchor"] = c.anchor;
    e["status"] = std::string(to_string(c.status));
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["margin"] = c.margin;
    e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["summary"] = {{"pass", v.count(CheckStatus::Pass)},
                  {"fail", v.count(CheckStatus::Fail)},
                  {"skipped", v.count(CheckStatus::Skipped)}};
  return j;
}

inline std::string verification_table(const VerificationOutcome& v) {
  std::string out = fmt::format("{:<28} {:<12} {:<8} {:>24} {:>24}\n", "check", "suite", "status", "observed", "bound");
  for (const auto& c : v.checks)
    out += fmt::format("{:<28} {:<12} {:<8} {:>24.17g} {:>24.17g}{}\n", c.id, c.suite, to_string(c.status), c.lhs,
                       c.rhs, c.note.empty() ? "" : "  # " + c.note);
  out += fmt::format("{} passed, {} failed, {} skipped\n", v.count(CheckStatus::Pass), v.count(CheckStatus::Fail),
                     v.count(CheckStatus::Skipped));
  return out;
}

/// Closed forms for n = 2, 3 used as independent references.
namespace reference {

inline double log_v_hyp_closed(int n, double R) {
  if (n == 2) return std::log(4.0 * std::numbers::pi) + 2.0 * log_sinh(0.5 * R);  // 2 pi (cosh R - 1)
  if (n == 3) {                                                                    // pi (sinh 2R - 2R)
    if (2.0 * R < 40.0) return std::log(std::numbers::pi * (std::sinh(2.0 * R) - 2.0 * R));
    const double ls = log_sinh(2.0 * R);
    return std::log(std::numbers::pi) + ls + std::log1p(-2.0 * R * std::exp(-ls));
  }
  throw Error(ErrorKind::UnsupportedDim, "closed-form ball volume only for n = 2, 3");
}

inline double f(int n, double R) {
  return 4.0 / R * (std::numbers::ln2 + log_v_hyp_closed(n, R) - log_v_hyp_closed(n, 0.5 * R));
}

inline double g(int n, double R) {
  return std::exp(log_v_hyp_closed(n, R) - log_v_hyp_closed(n, 0.5 * R) - 0.5 * (n - 1) * R);
}

inline double lambda_integrand(int n, double log_c3, double R) {
  return 2.0 / ((n - 1) * R) * (log_v_hyp_closed(n, R) - log_c3);
}

/// Extremum of fn over a uniform grid of the given step on [lo, hi].
template <class F>
double grid_extremum(F&& fn, double lo, double hi, double step, bool want_max) {
  double best = fn(lo);
  const long count = static_cast<long>(std::floor((hi - lo) / step));
  for (long i = 1; i <= count; ++i) {
    const double v = fn(lo + step * static_cast<double>(i));
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  const double last = fn(hi);
  return want_max ? std::max(best, last) : std::min(best, last);
}

}  // namespace reference

/// Fixture externals for identity checks in dimensions the configuration does
/// not cover. These are test values, not literature constants.
inline ExternalConstants fixture_externals() {
  ExternalConstants e;
  for (int n = 2; n <= 6; ++n) e.croke_cprime[n] = 1.0;
  e.ideal_simplex_vol_override = {{4, 0.2689}, {5, 0.1075}, {6, 0.0370}};
  return e;
}

/// Configured externals, with fixture values filling the gaps.
inline ExternalConstants externals_with_fixtures(const ExternalConstants& configured) {
  ExternalConstants e = fixture_externals();
  for (const auto& [n, v] : configured.croke_cprime) e.croke_cprime[n] = v;
  for (const auto& [n, v] : configured.ideal_simplex_vol_override) e.ideal_simplex_vol_override[n] = v;
  return e;
}

/// c''' with lambda integrand exactly 2 at R = 1: V_hyp(n, 1) e^{-(n-1)}.
inline double lambda_fixture_c_triple_prime(Dim dim, const Tolerance& tol = {}) {
  return std::exp(log_v_hyp(dim, 1.0, tol) - (dim.value() - 1));
}

namespace detail {

// Builds an outcome for "lhs <= rhs".
inline CheckOutcome upper(CheckOutcome c, double lhs, double rhs) {
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.status = (lhs <= rhs) ? CheckStatus::Pass : CheckStatus::Fail;
  return c;
}

// Builds an outcome for "lhs >= rhs".
inline CheckOutcome lower(CheckOutcome c, double lhs, double rhs) {
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = lhs - rhs;
  c.status = (lhs >= rhs) ? CheckStatus::Pass : CheckStatus::Fail;
  return c;
}

inline double rel_err(double value, double ref) { return std::abs(value - ref) / std::abs(ref); }

}  // namespace detail

struct CheckDef {
  std::string id;
  std::string suite;
  std::string description;
  std::string anchor;
  std::function<CheckOutcome(const Config&, CheckOutcome)> run;
};

inline std::vector<CheckDef> verification_checks() {
  using detail::lower;
  using detail::upper;
  std::vector<CheckDef> defs;

  defs.push_back({"C01.volume_closed_forms", "hypgeom",
                  "v_hyp(2,R), v_hyp(3,R) match 2pi(cosh R - 1), pi(sinh 2R - 2R) to 1e-10 relative",
                  "V_hyp(R) = Vol(S^{n-1}) int_0^R sinh^{n-1}",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = 0.0;
                    for (double R : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
                      worst = std::max(worst, detail::rel_err(v_hyp(Dim(2), R, cfg.quad),
                                                              2.0 * std::numbers::pi * (std::cosh(R) - 1.0)));
                      worst = std::max(worst, detail::rel_err(v_hyp(Dim(3), R, cfg.quad),
                                                              std::numbers::pi * (std::sinh(2.0 * R) - 2.0 * R)));
                    }
                    return upper(std::move(c), worst, 1e-10);
                  }});

  defs.push_back({"C02.f_large_radius", "asymptotics",
                  "|f(100) - 2(n-1) - 4 log2/100| <= 2e-3 for n = 2..5", "lim_{R->inf} f(R) = 2(n-1)",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = 0.0;
                    for (int n = 2; n <= 5; ++n)
                      worst = std::max(worst, std::abs(f_of_R(Dim(n), 100.0, cfg.quad) - 2.0 * (n - 1) -
                                                       4.0 * std::numbers::ln2 / 100.0));
                    return upper(std::move(c), worst, 2e-3);
                  }});

  defs.push_back({"C03.f_small_radius", "asymptotics",
                  "|R f(R) - 4(n+1) log 2| <= 1e-3 at R = 1e-3 for n = 2..4", "f(R) ~ 4(n+1) log2 / R as R->0",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = 0.0;
                    const double R = 1e-3;
                    for (int n = 2; n <= 4; ++n)
                      worst = std::max(worst, std::abs(R * f_of_R(Dim(n), R, cfg.quad) -
                                                       4.0 * (n + 1) * std::numbers::ln2));
                    return upper(std::move(c), worst, 1e-3);
                  }});

  defs.push_back({"C04.chain_I_lower_bound", "kernel",
                  "log I - (lambda R/2 + log V(R/2)) >= 0 over the configured grid",
                  "I(lambda,R) >= e^{lambda R/2} |B(R/2)|",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = std::numeric_limits<double>::infinity();
                    for (int n : cfg.grid.dims)
                      for (double lambda : cfg.grid.lambda_values)
                        for (double R : cfg.grid.r_values) {
                          const KernelParams p(Dim(n), lambda, R);
                          const double log_A = 0.5 * lambda * R + log_v_hyp(p.dim, 0.5 * R, cfg.quad);
                          worst = std::min(worst, log_kernel_I(p, cfg.quad) - log_A);
                        }
                    return lower(std::move(c), worst, 0.0);
                  }});

  defs.push_back({"C05.two_lambda_bound", "kernel",
                  "deriv_bound / (2 lambda) <= 1 + 1e-9 wherever lambda >= lambda_min; >= 30 such grid points",
                  "||d S|| <= 2 lambda when lambda >= (2/R) log(2V(R)/V(R/2))",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = 0.0;
                    int qualifying = 0;
                    for (int n : cfg.grid.dims)
                      for (double lambda : cfg.grid.lambda_values)
                        for (double R : cfg.grid.r_values) {
                          const KernelParams p(Dim(n), lambda, R);
                          if (lambda < lambda_min(p.dim, R, cfg.quad)) continue;
                          ++qualifying;
                          worst = std::max(worst, deriv_bound(p, cfg.quad) / (2.0 * lambda));
                        }
                    c = upper(std::move(c), worst, 1.0 + 1e-9);
                    c.note = fmt::format("{} grid points with lambda >= lambda_min", qualifying);
                    if (qualifying < 30) {
                      c.status = CheckStatus::Fail;
                      c.note += " (need >= 30)";
                    }
                    return c;
                  }});

  defs.push_back({"C06.fd_derivative", "kernel",
                  "TV(h)/h <= 1.05 deriv_bound at h = 1e-3 and the rate converges under step halving",
                  "||d_y S|| <= lambda I / (I - |B(R)|)",
                  [](const Config& cfg, CheckOutcome c) {
                    struct Case {
                      int n;
                      double lambda;
                      double R;
                    };
                    double worst = 0.0;
                    bool converging = true;
                    for (const Case k : {Case{2, 1.0, 1.0}, Case{2, 3.0, 2.0}, Case{3, 2.0, 1.5}}) {
                      const KernelParams p(Dim(k.n), k.lambda, k.R);
                      std::vector<double> rates;
                      for (double h : {8e-3, 4e-3, 2e-3, 1e-3}) rates.push_back(fd_derivative_check(p, h, cfg.tv).fd_norm_rate);
                      const FdCheck fd = fd_derivative_check(p, 1e-3, cfg.tv);
                      worst = std::max(worst, (fd.fd_norm_rate - fd.tv_error / 1e-3) / fd.bound);
                      for (std::size_t i = 2; i < rates.size(); ++i)
                        if (!(std::abs(rates[i] - rates[i - 1]) < std::abs(rates[i - 1] - rates[i - 2]))) converging = false;
                    }
                    c = upper(std::move(c), worst, 1.0 + fd_slack);
                    if (!converging) {
                      c.status = CheckStatus::Fail;
                      c.note = "finite-difference rate does not converge under step halving";
                    }
                    return c;
                  }});

  defs.push_back({"C07.c_n_floor", "asymptotics",
                  "g_n(R) >= 1 - 1e-9 on 100 geometric R in [2,200], n = 2..6; c_n within 1e-6 of 1 at infinity",
                  "c_n = inf_{R>=2} V(R)/V(R/2) e^{-(n-1)R/2} > 0",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = std::numeric_limits<double>::infinity();
                    for (int n = 2; n <= 6; ++n)
                      for (int i = 0; i < 100; ++i) {
                        const double R = 2.0 * std::pow(100.0, i / 99.0);
                        worst = std::min(worst, halved_ratio_normalized(Dim(n), R, cfg.quad));
                      }
                    c = lower(std::move(c), worst, 1.0 - 1e-9);
                    for (int n = 2; n <= 6; ++n) {
                      const ExtremalResult r = compute_c_n(Dim(n), cfg.pipeline());
                      if (std::abs(r.value - 1.0) > 1e-6 || !r.at_infinity()) {
                        c.status = CheckStatus::Fail;
                        c.note += fmt::format("c_{} = {:.17g}{}; ", n, r.value, r.at_infinity() ? "" : " (finite arg)");
                      }
                    }
                    return c;
                  }});

  defs.push_back({"C08.lambda_n_law", "asymptotics",
                  "fixture c''': |h(200) - 2| <= 1e-2, lambda_n >= 2 and clamp flag consistent, n = 2..6",
                  "lambda_n = sup_{R>=1} (2/((n-1)R)) log(V(R)/c''') >= 2, integrand -> 2",
                  [](const Config& cfg, CheckOutcome c) {
                    double worst = 0.0;
                    for (int n = 2; n <= 6; ++n) {
                      const Dim dim(n);
                      const double c3 = lambda_fixture_c_triple_prime(dim, cfg.quad);
                      worst = std::max(worst, std::abs(lambda_integrand(dim, c3, 200.0, cfg.quad) - 2.0));
                      const LambdaN ln = compute_lambda_n(dim, c3, cfg.pipeline());
                      if (!(ln.lambda_n >= 2.0) || ln.clamped != (ln.sup.value < 2.0)) {
                        c.status = CheckStatus::Fail;
                        c.note += fmt::format("lambda_{} inconsistent; ", n);
                      }
                    }
                    const bool flagged = !c.note.empty();
                    c = upper(std::move(c), worst, 1e-2);
                    if (flagged) c.status = CheckStatus::Fail;
                    return c;
                  }});

  defs.push_back({"C09.pipeline_identities", "constants",
                  "alpha n! C = 1, beta lambda^n V_n = alpha, c''' = c c' 2^-n to 1e-12 relative, n = 2..6",
                  "alpha_n = 1/(n! C_n), beta_n = alpha_n/(lambda_n^n V_n), c'''_n = c_n c'_n 2^-n",
                  [](const Config& cfg, CheckOutcome c) {
                    const ExternalConstants ext = externals_with_fixtures(cfg.externals);
                    double worst = 0.0;
                    for (int n = 2; n <= 6; ++n) {
                      const ConstantsReport r = compute_beta_n(Dim(n), ext, cfg.pipeline());
                      worst = std::max(worst, std::abs(r.alpha_n * std::tgamma(n + 1.0) * r.C_n - 1.0));
                      worst = std::max(worst, detail::rel_err(r.beta_n * std::pow(r.lambda_n, n) * r.V_n, r.alpha_n));
                      worst = std::max(worst, detail::rel_err(r.c_triple_prime_n, r.c_n.value * r.c_prime_n * std::ldexp(1.0, -n)));
                      worst = std::max(worst, detail::rel_err(r.C_n, std::pow(r.f_sup.value, n)));
                    }
                    return upper(std::move(c), worst, 1e-12);
                  }});

  defs.push_back({"C10.ideal_simplex_volumes", "constants",
                  "V_2 = pi to 1e-12; V_3 = 3 Lambda(pi/3) = 1.0149416 +- 1e-5",
                  "||M|| = vol(M,hyp) / V_n, V_n maximal ideal simplex volume",
                  [](const Config& cfg, CheckOutcome c) {
                    const ExternalConstants none;
                    const double e2 = detail::rel_err(ideal_simplex_volume(Dim(2), none, cfg.quad), std::numbers::pi);
                    const double e3 = std::abs(ideal_simplex_volume(Dim(3), none, cfg.quad) - 1.0149416);
                    c = upper(std::move(c), e3, 1e-5);
                    if (e2 > 1e-12) {
                      c.status = CheckStatus::Fail;
                      c.note = fmt::format("V_2 relative error {:.3g}", e2);
                    }
                    return c;
                  }});

  defs.push_back({"C11.surface_consistency", "constants",
                  "genus-2 surface (vol 4pi, n=2): ||M|| = 4 to 1e-10; corollary = isoembolic threshold to 1e-12",
                  "||M|| = vol(M,hyp)/V_n",
                  [](const Config& cfg, CheckOutcome c) {
                    const ExternalConstants ext = externals_with_fixtures(cfg.externals);
                    const ThresholdReport t =
                        volume_thresholds(Dim(2), ext, 4.0 * std::numbers::pi, std::nullopt, cfg.pipeline());
                    const double e_norm = std::abs(t.simplicial_volume - 4.0);
                    const double e_eq = detail::rel_err(*t.corollary_threshold, t.isoembolic_threshold);
                    c = upper(std::move(c), e_norm, 1e-10);
                    if (e_eq > 1e-12) {
                      c.status = CheckStatus::Fail;
                      c.note = fmt::format("corollary/isoembolic mismatch {:.3g}", e_eq);
                    }
                    return c;
                  }});

  defs.push_back({"C12.optimizer_oracle", "constants",
                  "sup f, inf g (n=2,3) and sup of the lambda integrand match a 1e-4 grid scan within 1e-6",
                  "C_n = (sup_{R>=1} f)^n, c_n = inf_{R>=2} g, lambda_n = sup_{R>=1} h",
                  [](const Config& cfg, CheckOutcome c) {
                    constexpr double step = 1e-4;
                    double worst = 0.0;
                    for (int n : {2, 3}) {
                      const Dim dim(n);
                      const CAlpha ca = compute_C_alpha(dim, cfg.pipeline());
                      const double f_ref = reference::grid_extremum([n](double R) { return reference::f(n, R); },
                                                                    ca.f_sup.window_lo, ca.f_sup.window_hi, step, true);
                      worst = std::max(worst, std::abs(ca.f_sup.value - f_ref));

                      const ExtremalResult cn = compute_c_n(dim, cfg.pipeline());
                      const double g_ref = reference::grid_extremum([n](double R) { return reference::g(n, R); },
                                                                    cn.window_lo, cn.window_hi, step, false);
                      worst = std::max(worst, std::abs(cn.value - g_ref));

                      const double c3 = lambda_fixture_c_triple_prime(dim, cfg.quad);
                      const LambdaN ln = compute_lambda_n(dim, c3, cfg.pipeline());
                      const double log_c3 = std::log(c3);
                      const double h_ref = reference::grid_extremum(
                          [n, log_c3](double R) { return reference::lambda_integrand(n, log_c3, R); }, ln.sup.window_lo,
                          ln.sup.window_hi, step, true);
                      worst = std::max(worst, std::abs(ln.sup.value - h_ref));
                    }
                    return upper(std::move(c), worst, 1e-6);
                  }});

  defs.push_back({"C13.report_determinism", "constants",
                  "two constants reports (n=2) from the same config serialize to identical bytes",
                  "deterministic reporting",
                  [](const Config& cfg, CheckOutcome c) {
                    const ExternalConstants ext = externals_with_fixtures(cfg.externals);
                    const std::string digest = config_digest(cfg);
                    const std::string a = dump_json(constants_report_json(compute_beta_n(Dim(2), ext, cfg.pipeline()), digest));
                    const std::string b = dump_json(constants_report_json(compute_beta_n(Dim(2), ext, cfg.pipeline()), digest));
                    return upper(std::move(c), a == b ? 0.0 : 1.0, 0.0);
                  }});

  return defs;
}

inline const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> suites = {"all", "hypgeom", "kernel", "constants", "asymptotics"};
  return suites;
}

/// Runs every check of `suite` ("all" for everything) on up to cfg.threads
/// worker threads. Results keep the registry order.
inline VerificationOutcome run_verification(const Config& cfg, const std::string& suite = "all") {
  const auto& suites = verification_suites();
  if (std::find(suites.begin(), suites.end(), suite) == suites.end())
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
  std::vector<CheckDef> selected;
  for (auto& d : verification_checks())
    if (suite == "all" || d.suite == suite) selected.push_back(std::move(d));

  auto run_one = [&cfg](const CheckDef& d) {
    CheckOutcome base = make_outcome(d.id, d.suite, d.description, d.anchor);
    try {
      return d.run(cfg, base);
    } catch (const std::exception& e) {
      base.status = CheckStatus::Fail;
      base.lhs = std::numeric_limits<double>::quiet_NaN();
      base.rhs = std::numeric_limits<double>::quiet_NaN();
      base.margin = std::numeric_limits<double>::quiet_NaN();
      base.note = e.what();
      return base;
    }
  };

  VerificationOutcome out{suite, {}};
  out.checks.reserve(selected.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, cfg.threads));
  for (std::size_t start = 0; start < selected.size(); start += width) {
    std::vector<std::future<CheckOutcome>> batch;
    for (std::size_t i = start; i < std::min(selected.size(), start + width); ++i)
      batch.push_back(std::async(std::launch::async, run_one, std::cref(selected[i])));
    for (auto& f : batch) out.checks.push_back(f.get());
  }
  return out;
}

/// Chain entries plus the finite-difference check for a single parameter
/// triple. The finite-difference part is skipped outside n in {2, 3}.
inline VerificationOutcome kernel_check(const Config& cfg, const KernelParams& p, double fd_step) {
  VerificationOutcome out{"kernel-check", {}};
  const ChainReport rep = chain_check(p, cfg.quad);
  int index = 0;
  for (const auto& e : rep.chain_inequalities) {
    CheckOutcome c = make_outcome(fmt::format("chain.{}", ++index), "kernel", e.name, "inequality chain for the kernel derivative");
    c.lhs = e.lhs;
    c.rhs = e.rhs;
    c.margin = e.relation == Relation::LessEqual ? e.rhs - e.lhs : e.lhs - e.rhs;
    if (!e.applicable) {
      c.status = CheckStatus::Skipped;
      c.note = "not applicable";
    } else if (e.relation == Relation::Greater && !e.holds) {
      // A hypothesis of the chain, not a claim: below it the chain is vacuous.
      c.status = CheckStatus::Skipped;
      c.note = "hypothesis A > V(R) not met";
    } else {
      c.status = e.holds ? CheckStatus::Pass : CheckStatus::Fail;
    }
    out.checks.push_back(c);
  }
  CheckOutcome fd = make_outcome("fd.derivative", "kernel", "TV(h)/h <= 1.05 deriv_bound + quadrature error",
                                 "||d_y S|| <= lambda I / (I - |B(R)|)");
  const int n = p.dim.value();
  if (n != 2 && n != 3) {
    fd.status = CheckStatus::Skipped;
    fd.note = "UnsupportedDim";
  } else {
    const FdCheck r = fd_derivative_check(p, fd_step, cfg.tv);
    fd.lhs = r.fd_norm_rate;
    fd.rhs = r.bound * (1.0 + fd_slack) + r.tv_error / fd_step;
    fd.margin = fd.rhs - fd.lhs;
    fd.status = r.holds ? CheckStatus::Pass : CheckStatus::Fail;
  }
  out.checks.push_back(fd);
  return out;
}

}  // namespace macroball
