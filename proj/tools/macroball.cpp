// macroball command-line front-end.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "macroball/config.hpp"
#include "macroball/constants.hpp"
#include "macroball/report.hpp"
#include "macroball/verify.hpp"

namespace mb = macroball;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_usage = 2;
constexpr int exit_numeric = 3;

struct Common {
  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  cmd->add_option("--config", c.config_path, "Config file (default: $MACROBALL_CONFIG or ./macroball.toml)");
  cmd->add_option("--out", c.out, "Output path, '-' for stdout");
  if (with_format) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mb::Error(mb::ErrorKind::ConfigError, "cannot write " + path);
  out << text;
}

std::string outcome_csv(const mb::VerificationOutcome& v) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : v.checks)
    rows.push_back({c.id, c.suite, std::string(mb::to_string(c.status)), mb::format_double(c.lhs),
                    mb::format_double(c.rhs), mb::format_double(c.margin), c.note});
  return mb::to_csv({"id", "suite", "status", "lhs", "rhs", "margin", "note"}, rows);
}

std::string outcome_text(const mb::VerificationOutcome& v, const std::string& format, const std::string& digest) {
  if (format == "csv") return outcome_csv(v);
  mb::Json j = mb::verification_json(v);
  j["config_digest"] = digest;
  return mb::dump_json(j) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic ball-volume constants and kernel certificates"};
  app.require_subcommand(1);

  Common common_constants, common_curve, common_kernel, common_verify, common_thresholds;

  int dim = 0;
  auto* constants = app.add_subcommand("constants", "Compute the constants pipeline for one dimension");
  constants->add_option("--dim", dim, "Dimension n >= 2")->required();
  add_common(constants, common_constants);

  std::string which;
  double r_min = 0.0, r_max = 0.0;
  int samples = 0;
  auto* curve = app.add_subcommand("curve", "Sample f, g, the lambda integrand or v_hyp on a geometric grid");
  curve->add_option("--which", which, "Curve to sample")
      ->required()
      ->check(CLI::IsMember({"f", "g", "lambda_integrand", "v_hyp"}));
  curve->add_option("--dim", dim, "Dimension n >= 2")->required();
  curve->add_option("--r-min", r_min, "Smallest radius")->required();
  curve->add_option("--r-max", r_max, "Largest radius")->required();
  curve->add_option("--samples", samples, "Number of samples (>= 2)")->required();
  add_common(curve, common_curve);

  double lambda = 0.0, radius = 0.0, fd_step = 1e-3;
  auto* kernel = app.add_subcommand("kernel-check", "Certify the kernel derivative bound at one parameter triple");
  kernel->add_option("--dim", dim, "Dimension n >= 2")->required();
  kernel->add_option("--lambda", lambda, "Kernel rate lambda > 0")->required();
  kernel->add_option("--radius", radius, "Kernel radius R > 0")->required();
  kernel->add_option("--fd-step", fd_step, "Finite-difference step in (0, 1e-2]")->capture_default_str();
  add_common(kernel, common_kernel);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--suite", suite, "Suite to run")->check(CLI::IsMember(mb::verification_suites()))->capture_default_str();
  add_common(verify, common_verify);

  std::optional<double> vol_hyp, simplicial;
  auto* thresholds = app.add_subcommand("thresholds", "Volume-entropy thresholds for a closed manifold");
  thresholds->add_option("--dim", dim, "Dimension n >= 2")->required();
  thresholds->add_option("--vol-hyp", vol_hyp, "Hyperbolic volume of the manifold");
  thresholds->add_option("--simplicial-volume", simplicial, "Simplicial volume ||M||");
  add_common(thresholds, common_thresholds, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (constants->parsed()) {
      const mb::Config cfg = mb::load_effective_config(common_constants.config_path);
      const mb::ConstantsReport r = mb::compute_beta_n(mb::Dim(dim), cfg.externals, cfg.pipeline());
      const std::string digest = mb::config_digest(cfg);
      const std::string format = common_constants.format.value_or(cfg.output.format);
      emit(format == "csv" ? mb::constants_report_csv(r, digest) : mb::dump_json(mb::constants_report_json(r, digest)) + "\n",
           common_constants.out.value_or(cfg.output.path));
      return exit_ok;
    }
    if (curve->parsed()) {
      const mb::Config cfg = mb::load_effective_config(common_curve.config_path);
      const auto pts = mb::sample_curve(*mb::parse_curve_kind(which), mb::Dim(dim), r_min, r_max, samples, cfg);
      const std::string format = common_curve.format.value_or("csv");
      emit(format == "csv" ? mb::curve_csv(pts) : mb::dump_json(mb::curve_json(pts)) + "\n",
           common_curve.out.value_or(cfg.output.path));
      return exit_ok;
    }
    if (kernel->parsed()) {
      const mb::Config cfg = mb::load_effective_config(common_kernel.config_path);
      const mb::KernelParams p(mb::Dim(dim), lambda, radius);
      const mb::VerificationOutcome v = mb::kernel_check(cfg, p, fd_step);
      emit(outcome_text(v, common_kernel.format.value_or(cfg.output.format), mb::config_digest(cfg)),
           common_kernel.out.value_or(cfg.output.path));
      return v.exit_code() == 0 ? exit_ok : exit_verify;
    }
    if (verify->parsed()) {
      const mb::Config cfg = mb::load_effective_config(common_verify.config_path);
      const mb::VerificationOutcome v = mb::run_verification(cfg, suite);
      emit(outcome_text(v, common_verify.format.value_or(cfg.output.format), mb::config_digest(cfg)),
           common_verify.out.value_or(cfg.output.path));
      std::cerr << mb::verification_table(v);
      return v.exit_code() == 0 ? exit_ok : exit_verify;
    }
    if (thresholds->parsed()) {
      const mb::Config cfg = mb::load_effective_config(common_thresholds.config_path);
      const mb::ThresholdReport t = mb::volume_thresholds(mb::Dim(dim), cfg.externals, vol_hyp, simplicial, cfg.pipeline());
      emit(mb::dump_json(mb::threshold_report_json(t)) + "\n", common_thresholds.out.value_or(cfg.output.path));
      return exit_ok;
    }
  } catch (const mb::Error& e) {
    std::cerr << "error [" << mb::to_string(e.kind()) << "]: " << e.what() << "\n";
    return mb::is_usage_error(e.kind()) ? exit_usage : exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_usage;
}
