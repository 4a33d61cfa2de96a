#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "branchregen/quadrature.hpp"
#include "branchregen/rng.hpp"
#include "branchregen/special.hpp"

using namespace branchregen;

constexpr double kPi = std::numbers::pi;

TEST(BetaFunction, Identities) {
  EXPECT_NEAR(beta_function(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(beta_function(0.5, 0.5), kPi, 1e-13);
  EXPECT_NEAR(beta_function(0.3, 0.7), kPi / std::sin(0.3 * kPi), 1e-12);
  EXPECT_NEAR(beta_function(2, 3), 1.0 / 12.0, 1e-15);
  EXPECT_THROW(beta_function(0, 1), std::invalid_argument);
  EXPECT_THROW(beta_function(1, -1), std::invalid_argument);
}

TEST(IncompleteBeta, Endpoints) {
  EXPECT_EQ(incomplete_beta_ratio(0, 0.3, 0.8), 0.0);
  EXPECT_EQ(incomplete_beta_ratio(1, 0.3, 0.8), 1.0);
  EXPECT_NEAR(incomplete_beta_ratio(0.5, 1, 1), 0.5, 1e-15);
  // I_x(a, 1) = x^a.
  EXPECT_NEAR(incomplete_beta_ratio(0.3, 2.5, 1), std::pow(0.3, 2.5), 1e-14);
}

TEST(IncompleteBeta, Symmetry) {
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform();
    const double a = 0.05 + 4 * rng.uniform();
    const double b = 0.05 + 4 * rng.uniform();
    EXPECT_NEAR(incomplete_beta_ratio(x, a, b), 1 - incomplete_beta_ratio(1 - x, b, a), 1e-12) << x << ' ' << a << ' ' << b;
  }
}

TEST(IncompleteBeta, MatchesQuadrature) {
  for (const double x : {0.1, 0.5, 0.93}) {
    const double a = 0.4, b = 0.7;
    const double direct = quad_singular([&](double s, double) { return std::pow(x * s, a - 1) * std::pow(1 - x * s, b - 1) * x; },
                                        {1e-13});
    EXPECT_NEAR(incomplete_beta_ratio(x, a, b), direct / beta_function(a, b), 1e-10);
  }
}

TEST(IncompleteBetaComplex, RealAxisAgrees) {
  const double a = 0.6, b = 0.35, x = 0.4;
  const auto v = incomplete_beta_complex({x, 0}, {1 - x, 0}, a, b);
  EXPECT_NEAR(v.real(), incomplete_beta_ratio(x, a, b) * beta_function(a, b), 1e-10);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(GammaCdf, ClosedForms) {
  for (const double x : {0.0, 0.3, 1.0, 4.0}) EXPECT_NEAR(gamma_cdf(x, 1), 1 - std::exp(-x), 1e-15);
  EXPECT_EQ(gamma_cdf(0, 0.3), 0.0);
  EXPECT_NEAR(gamma_cdf(1, 2), 1 - 2 * std::exp(-1.0), 1e-15);
  // P(1/2, x) = erf(sqrt x).
  EXPECT_NEAR(gamma_cdf(2.0, 0.5), std::erf(std::sqrt(2.0)), 1e-14);
}

TEST(Quadrature, ClassicalIntegrals) {
  QuadratureSpec spec;
  spec.left_exponent = spec.right_exponent = -0.5;
  EXPECT_NEAR(quad_singular([](double u, double v) { return 1 / std::sqrt(u * v); }, spec), kPi, 1e-10);
  EXPECT_NEAR(quad_singular([](double, double) { return 1.0; }), 1.0, 1e-14);
  EXPECT_NEAR(quad_interval([](double x) { return std::exp(x); }, 0, 2), std::exp(2.0) - 1, 1e-10);
}

// Oracle: substitute u = s^4 near 0 and 1 - u = w^{1/0.4} near 1, removing
// both singularities, and integrate with a 10^6-node composite Simpson rule.
TEST(Quadrature, SingularIntegrandMatchesBruteForce) {
  auto f = [](double u, double v) { return std::exp(-u) * std::pow(u, -0.25) * std::pow(v, -0.6); };
  const double value = quad_singular(f, {1e-13});
  auto simpson = [](auto g, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = g(a) + g(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * g(a + i * h);
    return s * h / 3;
  };
  // [0, 1/2]: u = s^4, du = 4 s^3 ds, integrand 4 s^2 e^{-u} (1-u)^{-0.6}.
  const double left = simpson(
      [](double s) {
        const double u = s * s * s * s;
        return 4 * s * s * std::exp(-u) * std::pow(1 - u, -0.6);
      },
      0.0, std::pow(0.5, 0.25), 1'000'000);
  // [1/2, 1]: 1 - u = w^{2.5}, du = -2.5 w^{1.5} dw, integrand 2.5 w^{0} e^{-u} u^{-0.25}.
  const double right = simpson(
      [](double w) {
        const double u = 1 - std::pow(w, 2.5);
        return 2.5 * std::exp(-u) * std::pow(u, -0.25);
      },
      0.0, std::pow(0.5, 0.4), 1'000'000);
  EXPECT_NEAR(value, left + right, 1e-9);
}

TEST(Quadrature, ReproducesBetaFunction) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  for (int i = 0; i < 50; ++i) {
    const double a = unit(gen), b = unit(gen);
    QuadratureSpec spec{1e-11, 1e-12, 12, a - 1, b - 1};
    const double q = quad_singular([&](double u, double v) { return std::pow(u, a - 1) * std::pow(v, b - 1); }, spec);
    EXPECT_NEAR(q, beta_function(a, b), 1e-10 * std::max(1.0, beta_function(a, b))) << a << ' ' << b;
  }
}

TEST(Quadrature, ComplexIntegrand) {
  const std::complex<double> s{0.5, 2.0};
  const auto v = quad_singular([&](double u, double) { return std::exp(-s * u); });
  EXPECT_NEAR(std::abs(v - (1.0 - std::exp(-s)) / s), 0.0, 1e-12);
}

TEST(Quadrature, RejectsBadSpecs) {
  EXPECT_THROW(quad_singular([](double, double) { return 1.0; }, {0.0}), std::invalid_argument);
  QuadratureSpec s;
  s.left_exponent = -1.0;
  EXPECT_THROW(quad_singular([](double, double) { return 1.0; }, s), std::invalid_argument);
}

TEST(Quadrature, ReportsNonConvergence) {
  QuadratureSpec s{1e-16, 0.0, 3};
  // 1/u is not integrable; refinement never settles.
  EXPECT_THROW(quad_singular([](double u, double) { return 1.0 / u; }, s), QuadratureError);
}
