#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "macroball/numerics.hpp"
#include "oracles.hpp"

using namespace macroball;

TEST(IntegrateAdaptive, ConstantIntegrand) {
  const auto r = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_FALSE(r.log_space);
  EXPECT_GT(r.evaluations, 0);
}

TEST(IntegrateAdaptive, Sinh) {
  const auto r = integrate_adaptive([](double t) { return std::sinh(t); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, std::cosh(1.0) - 1.0, 1e-12);
  EXPECT_NEAR(r.value, 0.5430806, 1e-7);
}

TEST(IntegrateAdaptive, LogSineVanishes) {
  auto f = [](double t) { return std::log(2.0 * std::sin(t)); };
  const double oracle = oracle::simpson([](double u) {
    if (u == 0.0) return 0.0;
    const double u3 = u * u * u;
    return std::log(2.0 * std::sin(0.5 * std::numbers::pi * u3 * u)) * 2.0 * std::numbers::pi * u3;
  }, 0.0, 1.0, 40000);
  EXPECT_NEAR(oracle, 0.0, 1e-10);
  EXPECT_NEAR(integrate_adaptive(f, 0.0, 0.5 * std::numbers::pi).value, 0.0, 1e-10);
}

TEST(IntegrateAdaptive, Breakpoints) {
  const std::array<double, 3> cuts = {-1.0, 0.0, 2.0};
  const auto r = integrate_adaptive([](double t) { return std::abs(t); }, std::span<const double>(cuts), Tolerance{});
  EXPECT_NEAR(r.value, 2.5, 1e-13);
}

TEST(IntegrateAdaptive, EmptyInterval) {
  EXPECT_EQ(integrate_adaptive([](double) { return 5.0; }, 1.0, 1.0).value, 0.0);
}

TEST(IntegrateAdaptive, Errors) {
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0), Error);
  Tolerance tight;
  tight.rel = 1e-16;
  try {
    integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  Tolerance shallow;
  shallow.max_depth = 2;
  shallow.abs = 0.0;
  try {
    integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, shallow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DepthExceeded);
  }
}

TEST(IntegrateAdaptive, RandomPolynomialsAreExact) {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    double c[6];
    for (double& x : c) x = coef(rng);
    auto p = [&](double t) { return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5])))); };
    double exact = 0.0;
    for (int k = 0; k < 6; ++k) exact += c[k] * std::pow(2.0, k + 1) / (k + 1);
    EXPECT_NEAR(integrate_adaptive(p, 0.0, 2.0).value, exact, 1e-11 * (1.0 + std::abs(exact)));
  }
}

TEST(LogIntegrateExp, Examples) {
  EXPECT_NEAR(log_integrate_exp([](double) { return 0.0; }, 0.0, 1.0).value, 0.0, 1e-14);
  EXPECT_NEAR(log_integrate_exp([](double t) { return t; }, 0.0, 1.0).value, std::log(std::exp(1.0) - 1.0), 1e-12);
  const auto big = log_integrate_exp([](double t) { return 1000.0 * t; }, 0.0, 1.0);
  EXPECT_TRUE(big.log_space);
  EXPECT_NEAR(big.value, 1000.0 - std::log(1000.0) + std::log1p(-std::exp(-1000.0)), 1e-9);
}

TEST(LogIntegrateExp, NegativeInfinityIsZeroMass) {
  auto g = [](double t) { return t < 0.5 ? -std::numeric_limits<double>::infinity() : 0.0; };
  EXPECT_NEAR(log_integrate_exp(g, 0.0, 1.0).value, std::log(0.5), 1e-9);
  auto none = [](double) { return -std::numeric_limits<double>::infinity(); };
  EXPECT_EQ(log_integrate_exp(none, 0.0, 1.0).value, -std::numeric_limits<double>::infinity());
}

TEST(LogIntegrateExp, NanIsAnError) {
  try {
    log_integrate_exp([](double) { return std::nan(""); }, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
}

TEST(LogIntegrateExp, NarrowPeak) {
  // Gaussian of width 1e-3 centred inside a wide interval.
  auto g = [](double t) { return -0.5 * (t - 3.7) * (t - 3.7) / 1e-6; };
  EXPECT_NEAR(log_integrate_exp(g, 0.0, 10.0).value, std::log(std::sqrt(2.0 * std::numbers::pi) * 1e-3), 1e-9);
}

TEST(SphereVolume, Examples) {
  EXPECT_NEAR(sphere_volume(0), 2.0, 1e-15);
  EXPECT_NEAR(sphere_volume(1), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_volume(2), 4.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_volume(3), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
  for (int k = 0; k <= 12; ++k) EXPECT_NEAR(sphere_volume(k) / oracle::sphere(k), 1.0, 1e-14) << k;
  EXPECT_THROW(sphere_volume(-1), Error);
}

TEST(GammaHalfInteger, MatchesStd) {
  for (int m = 1; m <= 30; ++m) EXPECT_NEAR(gamma_half_integer(m) / std::tgamma(0.5 * m), 1.0, 1e-14) << m;
  EXPECT_THROW(gamma_half_integer(0), Error);
}

TEST(Lobachevsky, Examples) {
  EXPECT_EQ(lobachevsky(0.0), 0.0);
  EXPECT_NEAR(lobachevsky(0.5 * std::numbers::pi), 0.0, 1e-10);
  const double l3 = lobachevsky(std::numbers::pi / 3.0);
  EXPECT_NEAR(l3, oracle::lobachevsky(std::numbers::pi / 3.0), 1e-10);
  EXPECT_NEAR(3.0 * l3, 1.0149416, 1e-7);
}

TEST(Lobachevsky, MatchesQuadratureOracle) {
  for (double theta : {0.01, 0.1, 0.2, 0.25, 0.26, 0.5, 0.9, 1.2, 1.5, 2.0, 2.8, 3.1})
    EXPECT_NEAR(lobachevsky(theta), oracle::lobachevsky(theta), 1e-10) << theta;
}

TEST(Lobachevsky, OddAndPiPeriodic) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    const double t = u(rng);
    EXPECT_NEAR(lobachevsky(-t), -lobachevsky(t), 1e-13);
    EXPECT_NEAR(lobachevsky(t + std::numbers::pi), lobachevsky(t), 1e-12);
  }
}

TEST(LogSinh, StableAcrossRange) {
  for (double t : {1e-8, 1e-3, 0.5, 1.0, 5.0, 30.0}) EXPECT_NEAR(log_sinh(t), std::log(std::sinh(t)), 1e-14 * 50);
  EXPECT_NEAR(log_sinh(1000.0), 1000.0 - std::numbers::ln2, 1e-12);
}
