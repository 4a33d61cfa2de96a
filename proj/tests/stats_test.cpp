#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "branchregen/rng.hpp"
#include "branchregen/samplers.hpp"
#include "branchregen/stats.hpp"

using namespace branchregen;

namespace {

std::vector<double> uniforms(int n, std::uint64_t index) {
  RngStream rng(31, index);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.uniform();
  return v;
}

}  // namespace

TEST(EmpiricalDistribution, StepFunction) {
  const EmpiricalDistribution d({3, 1, 2, 2});
  EXPECT_EQ(d.samples(), (std::vector<double>{1, 2, 2, 3}));
  EXPECT_EQ(d.ecdf(0.5), 0.0);
  EXPECT_EQ(d.ecdf(1), 0.25);
  EXPECT_EQ(d.ecdf(2), 0.75);
  EXPECT_EQ(d.ecdf_left(2), 0.25);
  EXPECT_EQ(d.ecdf(3), 1.0);
  EXPECT_EQ(d.mean(), 2.0);
}

TEST(EmpiricalDistribution, ValidCdfForRandomSamples) {
  const EmpiricalDistribution d(uniforms(500, 0));
  double prev = 0;
  for (int i = -10; i <= 110; ++i) {
    const double f = d.ecdf(i / 100.0);
    ASSERT_GE(f, prev);
    prev = f;
  }
  EXPECT_EQ(d.ecdf(-1), 0.0);
  EXPECT_EQ(d.ecdf(2), 1.0);
}

TEST(KsDistance, ConstructedQuantiles) {
  const int n = 999;
  std::vector<double> q;
  for (int i = 1; i <= n; ++i) q.push_back(static_cast<double>(i) / (n + 1));
  EXPECT_LE(ks_distance(EmpiricalDistribution(q), LimitLaw::unit_uniform()), 1.0 / (n + 1) + 1e-12);
}

TEST(KsDistance, UniformSampleNoise) {
  EXPECT_LT(ks_distance(EmpiricalDistribution(uniforms(10'000, 1)), LimitLaw::unit_uniform()), 0.025);
}

TEST(KsDistance, SingleSample) {
  EXPECT_DOUBLE_EQ(ks_distance(EmpiricalDistribution({0.0}), LimitLaw::unit_uniform()), 1.0);
  EXPECT_THROW(ks_distance(EmpiricalDistribution(), LimitLaw::unit_uniform()), std::invalid_argument);
}

TEST(KsDistance, HandlesAtoms) {
  // Half the samples at 0 against a law with atom 1/2 at 0.
  std::vector<double> s(1000, 0.0);
  for (int i = 0; i < 1000; ++i) s.push_back((i + 0.5) / 1000);
  EXPECT_LT(ks_distance(EmpiricalDistribution(s), LimitLaw::shifted_uniform(TailRatio::finite(1))), 1e-3);
}

TEST(KsDistance, PermutationAndReparameterisationInvariance) {
  auto u = uniforms(2000, 2);
  const double d0 = ks_distance(EmpiricalDistribution(u), LimitLaw::exponential());
  std::mt19937_64 gen(3);
  std::shuffle(u.begin(), u.end(), gen);
  EXPECT_DOUBLE_EQ(ks_distance(EmpiricalDistribution(u), LimitLaw::exponential()), d0);
  // x -> -log(1 - x) maps a U(0,1) sample and law onto Exp(1).
  auto v = uniforms(2000, 4);
  std::vector<double> w;
  for (const double x : v) w.push_back(-std::log1p(-x));
  EXPECT_NEAR(ks_distance(EmpiricalDistribution(v), LimitLaw::unit_uniform()),
              ks_distance(EmpiricalDistribution(w), LimitLaw::exponential()), 1e-12);
}

TEST(KsTwoSample, Basics) {
  const EmpiricalDistribution a({1, 2, 3}), b({1, 2, 3});
  EXPECT_EQ(ks_two_sample(a, b), 0.0);
  EXPECT_EQ(ks_two_sample(EmpiricalDistribution({0}), EmpiricalDistribution({1})), 1.0);
}

TEST(TailEstimate, ExactPareto) {
  RngStream rng(32, 0);
  std::vector<double> v(1'000'000);
  for (auto& x : v) x = static_cast<double>(sample_heavy_tail_integer(0.8, rng));
  const auto reg = tail_exponent_estimate(v, TailMethod::log_log_regression);
  EXPECT_NEAR(reg.exponent, 0.8, 0.05);
  EXPECT_TRUE(reg.power_tail);
  EXPECT_NEAR(tail_exponent_estimate(v, TailMethod::hill).exponent, 0.8, 0.05);
}

TEST(TailEstimate, GeometricIsFlagged) {
  RngStream rng(33, 0);
  std::geometric_distribution<int> g(0.1);
  std::vector<double> v(100'000);
  for (auto& x : v) x = 1.0 + g(rng);
  const auto est = tail_exponent_estimate(v, TailMethod::log_log_regression);
  EXPECT_FALSE(est.power_tail);
  EXPECT_GT(est.exponent, 2.0);
}

TEST(TailEstimate, NeedsData) {
  const std::vector<double> few(999, 2.0);
  EXPECT_THROW(tail_exponent_estimate(few, TailMethod::hill), std::invalid_argument);
}

TEST(ComputeTheta, Examples) {
  MigrationParams a{0, 0, 1, IntegerLaw::constant(2)};
  EXPECT_DOUBLE_EQ(compute_theta(a, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(compute_theta(MigrationParams{0, 1, 0}, 0.5), 0.0);
  MigrationParams c{1, 0, 0};
  c.fam_emigration = IntegerLaw::constant(1);
  EXPECT_DOUBLE_EQ(compute_theta(c, 0.5), -2.0);
}

TEST(ComputeTheta, LinearInComponentMeans) {
  const double b = 0.7, p = 0.2, r = 0.3;
  auto theta = [&](double imm, double ind) {
    MigrationParams m{p, 1 - p - r, r, IntegerLaw::poisson(imm)};
    m.ind_emigration = IntegerLaw::tabulated({1 - ind / 2, 0, ind / 2});
    return compute_theta(m, b);
  };
  const double h = 0.25;
  EXPECT_NEAR((theta(1 + h, 1) - theta(1, 1)) / h, r / b, 1e-12);
  EXPECT_NEAR((theta(1, 1 + h) - theta(1, 1)) / h, -p / b, 1e-12);
}

TEST(ClassifyRecurrence, Partition) {
  EXPECT_EQ(classify_recurrence(1.5), Recurrence::non_recurrent);
  EXPECT_EQ(classify_recurrence(1.0), Recurrence::boundary);
  EXPECT_EQ(classify_recurrence(0.0), Recurrence::null_recurrent);
  EXPECT_EQ(classify_recurrence(0.999), Recurrence::null_recurrent);
  EXPECT_EQ(classify_recurrence(-0.3), Recurrence::positive_recurrent);
  EXPECT_EQ(classify_recurrence(-1e-300), Recurrence::positive_recurrent);
  EXPECT_EQ(classify_recurrence(std::nextafter(1.0, 2.0)), Recurrence::non_recurrent);
}

TEST(MarginalAt, Transforms) {
  const std::vector<std::int64_t> zeros(5, 0);
  const auto m0 = marginal_at(zeros, 10, MarginalTransform::identity, false);
  EXPECT_EQ(m0.distribution.ecdf(0), 1.0);
  EXPECT_EQ(m0.survival_fraction, 0.0);
  EXPECT_THROW(marginal_at(zeros, 10, MarginalTransform::identity, true), std::invalid_argument);

  const std::vector<std::int64_t> hundred{100};
  EXPECT_DOUBLE_EQ(marginal_at(hundred, 100, MarginalTransform::divide_by_bt, false, 1.0).distribution.samples()[0], 1.0);
  const std::vector<std::int64_t> v{100};
  EXPECT_NEAR(marginal_at(v, 100'000, MarginalTransform::log_over_log_t, false).distribution.samples()[0], 0.4, 1e-12);

  const std::vector<std::int64_t> mixed{0, 5, 0, 7};
  const auto lg = marginal_at(mixed, 100, MarginalTransform::log_over_log_t, false);
  EXPECT_EQ(lg.zero_count, 2u);
  EXPECT_EQ(lg.distribution.count(), 2u);
  EXPECT_DOUBLE_EQ(lg.survival_fraction, 0.5);
}

TEST(MarginalAt, ConditioningConsistency) {
  std::vector<std::int64_t> values;
  RngStream rng(34, 0);
  for (int i = 0; i < 2000; ++i) values.push_back(rng.bernoulli(0.3) ? 0 : static_cast<std::int64_t>(1 + (rng() % 50)));
  const auto all = marginal_at(values, 10, MarginalTransform::divide_by_bt, false, 0.5);
  const auto pos = marginal_at(values, 10, MarginalTransform::divide_by_bt, true, 0.5);
  EXPECT_EQ(all.survival_fraction, pos.survival_fraction);
  for (const double x : all.distribution.samples()) {
    EXPECT_NEAR(all.distribution.ecdf(x),
                pos.survival_fraction * pos.distribution.ecdf(x) + (1 - pos.survival_fraction) * (x >= 0), 1e-12);
  }
}

TEST(MarginalAt, FromTrajectories) {
  const std::vector<Trajectory> paths{{{0, 3, 6}}, {{0, 1, 0}}};
  const auto m = marginal_at(paths, 2, MarginalTransform::identity, false);
  EXPECT_EQ(m.distribution.samples(), (std::vector<double>{0, 6}));
}

TEST(TransformNames, RoundTrip) {
  for (const auto t : {MarginalTransform::identity, MarginalTransform::divide_by_bt, MarginalTransform::log_over_log_t}) {
    EXPECT_EQ(marginal_transform_from_string(to_string(t)), t);
  }
  EXPECT_THROW(marginal_transform_from_string("square"), std::invalid_argument);
}
