#pragma once

// Report serialization (JSON, RFC-4180 CSV) and curve sampling.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "macroball/config.hpp"
#include "macroball/constants.hpp"
#include "macroball/json_writer.hpp"
#include "macroball/kernel.hpp"

namespace macroball {

inline Json extremal_summary_json(const ExtremalResult& r) {
  Json j;
  j["value"] = r.value;
  j["arg"] = r.arg ? Json(*r.arg) : Json(nullptr);
  j["at_infinity"] = r.at_infinity();
  return j;
}

/// The constants report; top-level keys are a fixed schema.
inline Json constants_report_json(const ConstantsReport& r, const std::string& digest) {
  Json j;
  j["dim"] = r.dim;
  j["V_n"] = r.V_n;
  j["f_sup"] = extremal_summary_json(r.f_sup);
  j["C_n"] = r.C_n;
  j["alpha_n"] = r.alpha_n;
  j["c_n"] = r.c_n.value;
  j["c_prime_n"] = r.c_prime_n;
  j["c_triple_prime_n"] = r.c_triple_prime_n;
  j["lambda_n"] = r.lambda_n;
  j["lambda_clamped"] = r.lambda_clamped;
  j["beta_n"] = r.beta_n;
  j["entropy_threshold_ratio"] = r.entropy_threshold_ratio;
  j["isoembolic_coefficient"] = r.isoembolic_coefficient;
  Json prov = Json::object();
  for (const auto& [field, p] : r.provenance) prov[field] = std::string(to_string(p));
  j["provenance"] = prov;
  j["config_digest"] = digest;
  return j;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// RFC-4180: CRLF line endings, mandatory header row.
inline std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(fields[i]);
    }
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

inline std::string constants_report_csv(const ConstantsReport& r, const std::string& digest) {
  std::vector<std::vector<std::string>> rows = {
      {"dim", std::to_string(r.dim)},
      {"V_n", format_double(r.V_n)},
      {"f_sup.value", format_double(r.f_sup.value)},
      {"f_sup.arg", r.f_sup.arg ? format_double(*r.f_sup.arg) : std::string("inf")},
      {"C_n", format_double(r.C_n)},
      {"alpha_n", format_double(r.alpha_n)},
      {"c_n", format_double(r.c_n.value)},
      {"c_prime_n", format_double(r.c_prime_n)},
      {"c_triple_prime_n", format_double(r.c_triple_prime_n)},
      {"lambda_n", format_double(r.lambda_n)},
      {"lambda_clamped", r.lambda_clamped ? "true" : "false"},
      {"beta_n", format_double(r.beta_n)},
      {"entropy_threshold_ratio", format_double(r.entropy_threshold_ratio)},
      {"isoembolic_coefficient", format_double(r.isoembolic_coefficient)},
      {"config_digest", digest},
  };
  return to_csv({"key", "value"}, rows);
}

inline Json threshold_report_json(const ThresholdReport& t) {
  Json j;
  j["dim"] = t.dim;
  j["simplicial_volume"] = t.simplicial_volume;
  j["simplicial_volume_derived"] = t.simplicial_volume_derived;
  j["theorem_threshold"] = t.theorem_threshold;
  j["corollary_threshold"] = t.corollary_threshold ? Json(*t.corollary_threshold) : Json(nullptr);
  j["isoembolic_threshold"] = t.isoembolic_threshold;
  j["entropy_threshold"] = t.entropy_threshold ? Json(*t.entropy_threshold) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Curves

enum class CurveKind { F, G, LambdaIntegrand, VHyp };

inline std::optional<CurveKind> parse_curve_kind(const std::string& s) {
  if (s == "f") return CurveKind::F;
  if (s == "g") return CurveKind::G;
  if (s == "lambda_integrand") return CurveKind::LambdaIntegrand;
  if (s == "v_hyp") return CurveKind::VHyp;
  return std::nullopt;
}

struct CurvePoint {
  double R = 0.0;
  double value = 0.0;
};

/// Geometrically spaced samples R_i = r_min (r_max / r_min)^{i / (samples - 1)}.
/// The lambda integrand needs c'''_n, derived from the configured Croke constant.
inline std::vector<CurvePoint> sample_curve(CurveKind kind, Dim dim, double r_min, double r_max, int samples,
                                            const Config& cfg) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw Error(ErrorKind::InvalidArgument, "curve range must satisfy 0 < r_min < r_max");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "curve needs at least 2 samples");
  std::optional<double> c_triple_prime;
  if (kind == CurveKind::LambdaIntegrand) {
    const double c_prime = require_croke(dim, cfg.externals);
    c_triple_prime = compute_c_n(dim, cfg.pipeline()).value * c_prime * std::ldexp(1.0, -dim.value());
  }
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  const double log_ratio = std::log(r_max / r_min);
  for (int i = 0; i < samples; ++i) {
    const double R = (i == samples - 1) ? r_max : r_min * std::exp(log_ratio * i / (samples - 1));
    double v = 0.0;
    switch (kind) {
      case CurveKind::F: v = f_of_R(dim, R, cfg.quad); break;
      case CurveKind::G: v = halved_ratio_normalized(dim, R, cfg.quad); break;
      case CurveKind::LambdaIntegrand: v = lambda_integrand(dim, *c_triple_prime, R, cfg.quad); break;
      case CurveKind::VHyp: v = v_hyp(dim, R, cfg.quad); break;
    }
    out.push_back({R, v});
  }
  return out;
}

inline std::string curve_csv(const std::vector<CurvePoint>& pts) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(pts.size());
  for (const auto& p : pts) rows.push_back({format_double(p.R), format_double(p.value)});
  return to_csv({"R", "value"}, rows);
}

inline Json curve_json(const std::vector<CurvePoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(Json{{"R", p.R}, {"value", p.value}});
  return arr;
}

}  // namespace macroball
