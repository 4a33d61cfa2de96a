#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "branchregen/special.hpp"
#include "branchregen/transforms.hpp"

using namespace branchregen;

namespace {

std::vector<double> lambdas(int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, -2 + 5.0 * i / (n - 1)));
  return out;
}

}  // namespace

TEST(Phi, ValueAtZero) {
  EXPECT_DOUBLE_EQ(phi_laplace(0.0, 0.1, 0.8), 1.0);
  EXPECT_DOUBLE_EQ(phi_laplace(0.0, 0.0, 0.6), 1.0);
}

TEST(Phi, ClosedFormAtThetaZero) {
  for (const double rho : {0.6, 0.8, 0.9}) {
    for (const double l : lambdas(20)) {
      EXPECT_NEAR(phi_laplace(l, 0.0, rho), 1 - std::pow(l / (1 + l), rho), 1e-10) << rho << ' ' << l;
    }
  }
}

TEST(Phi, RejectsOutsideRegime) {
  EXPECT_THROW(phi_laplace(1.0, 0.3, 0.8), std::invalid_argument);  // theta + rho >= 1
  EXPECT_THROW(phi_laplace(1.0, 0.1, 0.5), std::invalid_argument);
}

// Bernstein: a Laplace transform alternates in sign of its differences.
TEST(Phi, CompleteMonotonicitySpotCheck) {
  const double h = 0.05;
  for (int i = 0; i < 200; ++i) {
    const double l = i * h;
    const double f0 = phi_laplace(l, 0.1, 0.8), f1 = phi_laplace(l + h, 0.1, 0.8), f2 = phi_laplace(l + 2 * h, 0.1, 0.8);
    ASSERT_LT(f1 - f0, 0.0) << l;
    ASSERT_GT(f2 - 2 * f1 + f0, 0.0) << l;
  }
}

TEST(Phi, ComplexAgreesOnRealAxis) {
  for (const double l : lambdas(8)) {
    const auto z = phi_laplace(std::complex<double>(l, 0.0), 0.1, 0.8);
    EXPECT_NEAR(z.real(), phi_laplace(l, 0.1, 0.8), 1e-10);
    EXPECT_NEAR(z.imag(), 0.0, 1e-10);
  }
}

TEST(Lt1, ValueAtZero) {
  EXPECT_NEAR(lt1(0.0, 0.1, 0.8, TailRatio::finite(2)), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(lt1(0.0, 0.1, 0.8, TailRatio::zero()), 1.0, 1e-12);
}

TEST(Lt1, ThetaZeroSimplification) {
  for (const double l : lambdas(10)) {
    const double expected = (1 - incomplete_beta_ratio(l / (l + 1), 0.8, 0.2)) / 1.5;
    EXPECT_NEAR(lt1(l, 0.0, 0.8, TailRatio::finite(0.5)), expected, 1e-10) << l;
  }
}

TEST(Lt1, MixtureIdentity) {
  for (const double theta : {0.0, 0.1, 0.15}) {
    for (const double l : lambdas(10)) {
      EXPECT_NEAR(lt1(l, theta, 0.8, TailRatio::finite(0.7)), lt1_mixture(l, theta, 0.8, TailRatio::finite(0.7)), 1e-8)
          << theta << ' ' << l;
    }
  }
}

TEST(Lt2, ValueAtZero) { EXPECT_NEAR(lt2(0.0, 0.1, 0.8, 0.7), 1.0, 1e-12); }

TEST(Lt2, ThetaZeroSimplification) {
  const double rho = 0.8, alpha = 0.7;
  for (const double l : lambdas(10)) {
    // At theta = 0 the constant reduces to (l / (l + 1))^{alpha - rho}.
    const double c = std::pow(l / (l + 1), alpha - rho);
    EXPECT_NEAR(lt2(l, 0.0, rho, alpha), 1 - incomplete_beta_ratio(l / (l + 1), alpha, 1 - rho) / c, 1e-10) << l;
  }
}

TEST(Lt2, MixtureIdentity) {
  for (const double theta : {0.0, 0.1, 0.15}) {
    for (const double alpha : {0.6, 0.75, 1.0}) {
      for (const double l : lambdas(10)) {
        EXPECT_NEAR(lt2(l, theta, 0.8, alpha), lt2_mixture(l, theta, 0.8, alpha), 1e-8)
            << theta << ' ' << alpha << ' ' << l;
      }
    }
  }
}

// The alternative placement of the constant breaks the identity once theta > 0.
TEST(Lt2, NumeratorPlacementViolatesIdentity) {
  EXPECT_GT(std::abs(lt2_numerator_constant(1.0, 0.1, 0.8, 0.7) - lt2_mixture(1.0, 0.1, 0.8, 0.7)), 1e-3);
}

TEST(Transforms, RangeAndMonotonicity) {
  double p_phi = 1.0, p_lt1 = 1.0, p_lt2 = 1.0;
  for (const double l : lambdas(40)) {
    const double f = phi_laplace(l, 0.1, 0.8);
    const double g = lt1(l, 0.1, 0.8, TailRatio::zero());
    const double h = lt2(l, 0.1, 0.8, 0.7);
    for (const double v : {f, g, h}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    ASSERT_LE(f, p_phi + 1e-12);
    ASSERT_LE(g, p_lt1 + 1e-12);
    ASSERT_LE(h, p_lt2 + 1e-12);
    p_phi = f;
    p_lt1 = g;
    p_lt2 = h;
  }
}

// Karamata: 1 - lt1(l) ~ C l^rho at 0 gives a survival tail of index rho.
TEST(RhoLimitLaw, TailIndexOfInvertedLt1) {
  const double rho = 0.8;
  const auto law = rho_limit_law(0.1, rho, TailRatio::zero());
  const double s10 = 1 - law.cdf(10), s1000 = 1 - law.cdf(1000);
  const double slope = (std::log(s1000) - std::log(s10)) / (std::log(1000.0) - std::log(10.0));
  EXPECT_NEAR(slope, -rho, 0.1);
}

TEST(RhoLimitLaw, AtomAndConditionalForm) {
  const auto law = rho_limit_law(0.1, 0.8, TailRatio::finite(1));
  EXPECT_NEAR(law.atom_at_zero(), 0.5, 1e-12);
  EXPECT_GE(law.cdf(0), 0.5);
  const auto cond = rho_limit_law_conditional(0.1, 0.8, 0.7);
  EXPECT_EQ(cond.atom_at_zero(), 0.0);
  EXPECT_GT(cond.cdf(1.0), 0.0);
  EXPECT_LT(cond.cdf(1.0), 1.0);
}
