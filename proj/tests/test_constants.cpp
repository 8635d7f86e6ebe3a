#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "macroball/constants.hpp"
#include "oracles.hpp"

using namespace macroball;

namespace {

ExternalConstants fixture() {
  ExternalConstants e;
  for (int n = 2; n <= 6; ++n) e.croke_cprime[n] = 1.0;
  e.ideal_simplex_vol_override = {{4, 0.2689}, {5, 0.1075}, {6, 0.0370}};
  return e;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(IdealSimplexVolume, Values) {
  const ExternalConstants none;
  EXPECT_NEAR(ideal_simplex_volume(Dim(2), none), std::numbers::pi, 1e-15);
  EXPECT_NEAR(ideal_simplex_volume(Dim(3), none), 3.0 * oracle::lobachevsky(std::numbers::pi / 3.0), 1e-10);
  EXPECT_NEAR(ideal_simplex_volume(Dim(3), none), 1.0149416, 1e-7);
  EXPECT_EQ(ideal_simplex_volume(Dim(4), fixture()), 0.2689);
  try {
    ideal_simplex_volume(Dim(4), none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingExternal);
    EXPECT_NE(std::string(e.what()).find("ideal_simplex_vol_override[4]"), std::string::npos);
  }
}

TEST(TailBounds, BracketTheirFunctions) {
  for (int n = 2; n <= 6; ++n) {
    const Dim d(n);
    for (double R : {1.0, 2.0, 5.0, 20.0, 80.0}) {
      EXPECT_GE(f_tail_upper(d, R), f_of_R(d, R) * (1.0 - 1e-13)) << n << " " << R;
      if (R >= 2.0) {
        EXPECT_LE(g_tail_lower(d, R), halved_ratio_normalized(d, R) * (1.0 + 1e-13)) << n << " " << R;
      }
      const double log_c3 = std::log(0.01);
      EXPECT_GE(lambda_integrand_tail_upper(d, log_c3, R), lambda_integrand(d, 0.01, R)) << n << " " << R;
    }
    EXPECT_NEAR(f_tail_upper(d, 1e6), 2.0 * (n - 1), 1e-5);
    EXPECT_NEAR(g_tail_lower(d, 200.0), 1.0, 1e-12);
  }
}

TEST(TailBounds, AreNonIncreasingSupremumBounds) {
  // sup_{r >= R} f(r) <= f_tail_upper(R) is what the ray scan needs; check on a grid.
  for (int n : {2, 4}) {
    const Dim d(n);
    for (double R : {1.0, 3.0, 10.0}) {
      double sup = 0.0;
      for (double r = R; r < R + 40.0; r += 0.05) sup = std::max(sup, f_of_R(d, r));
      EXPECT_LE(sup, f_tail_upper(d, R));
    }
  }
}

TEST(CAlpha, DimensionTwo) {
  const CAlpha ca = compute_C_alpha(Dim(2));
  EXPECT_NEAR(ca.f_sup.value, 8.565204595680635, 1e-12);
  ASSERT_TRUE(ca.f_sup.arg);
  EXPECT_NEAR(*ca.f_sup.arg, 1.0, 1e-9);
  EXPECT_NEAR(ca.C_n, 73.362729765868665, 1e-9);
  EXPECT_NEAR(ca.alpha_n, 0.0068154497739616609, 1e-15);
  EXPECT_NEAR(ca.f_sup.value, oracle::grid_max([](double R) { return oracle::f_closed(2, R); }, 1.0, 200.0, 1e-3), 1e-9);
}

TEST(CAlpha, IdentityAcrossDimensions) {
  const double f1[] = {8.565204595680635, 11.686477981267884, 14.856709850485357, 18.053619255429786,
                       21.266412640088894};
  for (int n = 2; n <= 6; ++n) {
    const CAlpha ca = compute_C_alpha(Dim(n));
    EXPECT_NEAR(ca.f_sup.value, f1[n - 2], 1e-10) << n;
    EXPECT_NEAR(ca.alpha_n * std::tgamma(n + 1.0) * ca.C_n, 1.0, 1e-12) << n;
  }
}

TEST(CN, FloorIsOneAtInfinity) {
  for (int n = 2; n <= 6; ++n) {
    const auto r = compute_c_n(Dim(n));
    EXPECT_TRUE(r.at_infinity()) << n;
    EXPECT_NEAR(r.value, 1.0, 1e-9) << n;
  }
}

TEST(CN, PointwiseFloorAtRandomRadii) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(2.0, 100.0);
  for (int n = 2; n <= 6; ++n)
    for (int i = 0; i < 100; ++i) EXPECT_GE(halved_ratio_normalized(Dim(n), u(rng)), 1.0 - 1e-12) << n;
}

TEST(LambdaN, Asymptotic) {
  for (int n : {2, 3}) {
    const Dim d(n);
    const double c3 = 0.05;
    const double K = oracle::sphere(n - 1) / (std::pow(2.0, n - 1) * (n - 1));
    const double expected = 2.0 + 2.0 / ((n - 1) * 200.0) * std::log(K / c3);
    EXPECT_NEAR(lambda_integrand(d, c3, 200.0), expected, 1e-6) << n;
  }
}

TEST(LambdaN, ConstructedIdentityAndClamp) {
  for (int n = 2; n <= 6; ++n) {
    const Dim d(n);
    const double c3 = std::exp(log_v_hyp(d, 1.0) - (n - 1));
    EXPECT_NEAR(lambda_integrand(d, c3, 1.0), 2.0, 1e-12);
    const LambdaN ln = compute_lambda_n(d, c3);
    EXPECT_GE(ln.lambda_n, 2.0);
    EXPECT_EQ(ln.clamped, ln.sup.value < 2.0);
  }
  // A huge c''' keeps the integrand below 2 on every finite R; the supremum
  // is then the limit 2, approached at infinity.
  const LambdaN far = compute_lambda_n(Dim(2), 1e6);
  EXPECT_TRUE(far.sup.at_infinity());
  EXPECT_EQ(far.lambda_n, 2.0);
  EXPECT_FALSE(far.clamped);
  EXPECT_THROW(compute_lambda_n(Dim(2), 0.0), Error);
}

TEST(BetaN, InvariantsWithFixture) {
  const ExternalConstants ext = fixture();
  for (int n = 2; n <= 6; ++n) {
    const ConstantsReport r = compute_beta_n(Dim(n), ext);
    EXPECT_GT(r.alpha_n, 0.0);
    EXPECT_GT(r.beta_n, 0.0);
    EXPECT_LE(r.beta_n, r.alpha_n / (std::pow(2.0, n) * r.V_n) * (1.0 + 1e-12));
    EXPECT_LT(rel(r.beta_n * std::pow(r.lambda_n, n) * r.V_n, r.alpha_n), 1e-12);
    EXPECT_LT(rel(r.c_triple_prime_n, r.c_n.value * r.c_prime_n * std::ldexp(1.0, -n)), 1e-12);
    EXPECT_EQ(r.provenance.at("V_n"), n <= 3 ? Provenance::Computed : Provenance::External);
  }
}

TEST(BetaN, MonotoneInCroke) {
  ExternalConstants ext = fixture();
  double prev_c3 = 0.0, prev_lambda = 1e300, prev_beta = 0.0;
  for (double cp : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    ext.croke_cprime[2] = cp;
    const ConstantsReport r = compute_beta_n(Dim(2), ext);
    EXPECT_GT(r.c_triple_prime_n, prev_c3);
    EXPECT_LE(r.lambda_n, prev_lambda);
    EXPECT_GE(r.beta_n, prev_beta);
    prev_c3 = r.c_triple_prime_n;
    prev_lambda = r.lambda_n;
    prev_beta = r.beta_n;
  }
}

TEST(BetaN, MissingExternals) {
  try {
    compute_beta_n(Dim(2), ExternalConstants{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingExternal);
    EXPECT_NE(std::string(e.what()).find("croke_cprime[2]"), std::string::npos);
  }
  ExternalConstants bad;
  bad.croke_cprime[2] = -1.0;
  EXPECT_THROW(compute_beta_n(Dim(2), bad), Error);
}

TEST(VolumeThresholds, GenusTwoSurface) {
  const ThresholdReport t = volume_thresholds(Dim(2), fixture(), 4.0 * std::numbers::pi, std::nullopt);
  EXPECT_TRUE(t.simplicial_volume_derived);
  EXPECT_NEAR(t.simplicial_volume, 4.0, 1e-12);
  EXPECT_NEAR(t.theorem_threshold, 0.027261799095846643, 1e-12);
  ASSERT_TRUE(t.corollary_threshold);
  EXPECT_LT(rel(*t.corollary_threshold, t.isoembolic_threshold), 1e-12);
  ASSERT_TRUE(t.entropy_threshold);
}

TEST(VolumeThresholds, SimplicialOnlyAndMissing) {
  const ThresholdReport t = volume_thresholds(Dim(2), fixture(), std::nullopt, 4.0);
  EXPECT_FALSE(t.simplicial_volume_derived);
  EXPECT_FALSE(t.corollary_threshold);
  EXPECT_FALSE(t.entropy_threshold);
  try {
    volume_thresholds(Dim(2), fixture(), std::nullopt, std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingInput);
  }
}
