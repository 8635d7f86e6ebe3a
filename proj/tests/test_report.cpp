#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "macroball/config.hpp"
#include "macroball/report.hpp"
#include "macroball/verify.hpp"

using namespace macroball;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test");
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Config, Defaults) {
  const Config c = parse("");
  EXPECT_EQ(c.quad.rel, 1e-10);
  EXPECT_EQ(c.grid.dims, (std::vector<int>{2, 3, 4}));
  EXPECT_TRUE(c.externals.croke_cprime.empty());
  EXPECT_EQ(c.output.format, "json");
}

TEST(Config, ParsesSections) {
  const Config c = parse(
      "# comment\n"
      "[numerics]\nrel = 1e-9\nmax_depth = 40\n"
      "[grid]\ndims = [2, 5]\nr_values = [0.5, 3]\n"
      "[croke_cprime]\n2 = 1.5\n"
      "[ideal_simplex_vol_override]\n4 = 0.2689\n"
      "[output]\nformat = \"csv\"\n"
      "[verify]\nthreads = 2\n");
  EXPECT_EQ(c.quad.rel, 1e-9);
  EXPECT_EQ(c.quad.max_depth, 40);
  EXPECT_EQ(c.grid.dims, (std::vector<int>{2, 5}));
  EXPECT_EQ(c.grid.r_values, (std::vector<double>{0.5, 3.0}));
  EXPECT_EQ(c.externals.croke_cprime.at(2), 1.5);
  EXPECT_EQ(c.externals.ideal_simplex_vol_override.at(4), 0.2689);
  EXPECT_EQ(c.output.format, "csv");
  EXPECT_EQ(c.threads, 2);
}

TEST(Config, RejectsBadInput) {
  EXPECT_EQ(kind_of("[numerics]\nbogus = 1\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[nowhere]\nx = 1\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[numerics]\nrel = abc\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[grid]\ndims = [1, 2]\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[grid]\ndims = []\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[grid]\nr_values = [0, 1]\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[grid]\nlambda_values = 3\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[output]\nformat = xml\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[croke_cprime]\n2 = -1\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[croke_cprime]\ntwo = 1\n"), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of("[verify]\nthreads = 0\n"), ErrorKind::ConfigError);
}

TEST(Config, DigestTracksContent) {
  const Config a = parse("");
  const Config b = parse("[croke_cprime]\n2 = 1.0\n");
  EXPECT_EQ(config_digest(a), config_digest(parse("")));
  EXPECT_NE(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).rfind("sha256:", 0), 0u);
  EXPECT_EQ(config_digest(a).size(), 7u + 64u);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(JsonWriter, SeventeenDigitsAndOrder) {
  Json j;
  j["z"] = 0.1;
  j["a"] = 1;
  j["nan"] = std::nan("");
  j["list"] = Json::array({1.5, true, nullptr, "s\"q"});
  EXPECT_EQ(dump_json(j, -1), "{\"z\":0.10000000000000001,\"a\":1,\"nan\":null,\"list\":[1.5,true,null,\"s\\\"q\"]}");
  EXPECT_EQ(format_double(std::numbers::pi), "3.1415926535897931");
}

TEST(Csv, Rfc4180) {
  const std::string out = to_csv({"a", "b"}, {{"1,2", "say \"hi\""}, {"x", ""}});
  EXPECT_EQ(out, "a,b\r\n\"1,2\",\"say \"\"hi\"\"\"\r\nx,\r\n");
}

TEST(ConstantsReportJson, SchemaKeys) {
  ExternalConstants ext;
  ext.croke_cprime[2] = 1.0;
  const ConstantsReport r = compute_beta_n(Dim(2), ext);
  const Json j = constants_report_json(r, "sha256:x");
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {"dim", "V_n", "f_sup", "C_n", "alpha_n", "c_n", "c_prime_n",
                                             "c_triple_prime_n", "lambda_n", "lambda_clamped", "beta_n",
                                             "entropy_threshold_ratio", "isoembolic_coefficient", "provenance",
                                             "config_digest"};
  EXPECT_EQ(keys, expected);
  EXPECT_TRUE(j["f_sup"].contains("value"));
  EXPECT_TRUE(j["f_sup"].contains("arg"));
  EXPECT_TRUE(j["f_sup"].contains("at_infinity"));
  EXPECT_NEAR(j["alpha_n"].get<double>(), 6.815e-3, 1e-6);
  const std::string csv = constants_report_csv(r, "sha256:x");
  EXPECT_EQ(csv.rfind("key,value\r\n", 0), 0u);
}

TEST(Curve, SmallRadiusLawOnFirstRow) {
  const Config cfg;
  const auto pts = sample_curve(CurveKind::F, Dim(2), 0.01, 100.0, 500, cfg);
  ASSERT_EQ(pts.size(), 500u);
  EXPECT_EQ(pts.front().R, 0.01);
  EXPECT_EQ(pts.back().R, 100.0);
  EXPECT_NEAR(pts.front().value * 0.01 / (12.0 * std::numbers::ln2), 1.0, 1e-3);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GT(pts[i].R, pts[i - 1].R);
}

TEST(Curve, GAtLeastOneAndVHypClosedForm) {
  const Config cfg;
  for (const auto& p : sample_curve(CurveKind::G, Dim(2), 2.0, 200.0, 200, cfg)) EXPECT_GE(p.value, 1.0 - 1e-12);
  for (const auto& p : sample_curve(CurveKind::VHyp, Dim(3), 0.1, 10.0, 50, cfg))
    EXPECT_NEAR(p.value / (std::numbers::pi * (std::sinh(2.0 * p.R) - 2.0 * p.R)), 1.0, 1e-9);
  const std::string csv = curve_csv(sample_curve(CurveKind::VHyp, Dim(2), 1.0, 2.0, 2, cfg));
  EXPECT_EQ(csv.rfind("R,value\r\n1,", 0), 0u);
}

TEST(Curve, Errors) {
  const Config cfg;
  EXPECT_THROW(sample_curve(CurveKind::F, Dim(2), 0.0, 1.0, 5, cfg), Error);
  EXPECT_THROW(sample_curve(CurveKind::F, Dim(2), 2.0, 1.0, 5, cfg), Error);
  EXPECT_THROW(sample_curve(CurveKind::F, Dim(2), 1.0, 2.0, 1, cfg), Error);
  try {
    sample_curve(CurveKind::LambdaIntegrand, Dim(2), 1.0, 2.0, 5, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingExternal);
  }
  EXPECT_FALSE(parse_curve_kind("h"));
}

TEST(Verify, SuiteFilterAndUniqueIds) {
  Config cfg;
  const auto kernel = run_verification(cfg, "hypgeom");
  ASSERT_EQ(kernel.checks.size(), 1u);
  EXPECT_EQ(kernel.checks[0].suite, "hypgeom");
  EXPECT_EQ(kernel.exit_code(), 0);
  std::set<std::string> ids;
  for (const auto& d : verification_checks()) EXPECT_TRUE(ids.insert(d.id).second) << d.id;
  EXPECT_EQ(ids.size(), 13u);
  EXPECT_THROW(run_verification(cfg, "nope"), Error);
}

TEST(Verify, ImpossibleToleranceFailsWithoutCrashing) {
  Config cfg = parse("[numerics]\nrel = 1e-16\n");
  const auto v = run_verification(cfg, "hypgeom");
  EXPECT_EQ(v.exit_code(), 1);
  EXPECT_EQ(v.checks[0].status, CheckStatus::Fail);
  EXPECT_FALSE(v.checks[0].note.empty());
}

TEST(KernelCheck, SkipsFiniteDifferenceOutsideTwoAndThree) {
  const Config cfg;
  const auto v = kernel_check(cfg, KernelParams(Dim(5), 2.0, 2.0), 1e-3);
  EXPECT_EQ(v.checks.back().status, CheckStatus::Skipped);
  EXPECT_EQ(v.checks.back().note, "UnsupportedDim");
  EXPECT_EQ(v.exit_code(), 0);
  const auto ok = kernel_check(cfg, KernelParams(Dim(2), 3.0, 2.0), 1e-3);
  EXPECT_EQ(ok.count(CheckStatus::Fail), 0);
  EXPECT_EQ(ok.checks.back().status, CheckStatus::Pass);
}
