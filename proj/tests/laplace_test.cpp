#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "branchregen/laplace.hpp"
#include "branchregen/process.hpp"
#include "branchregen/stats.hpp"
#include "branchregen/transforms.hpp"

using namespace branchregen;
using cd = std::complex<double>;

TEST(EulerInversion, ExponentialPair) {
  std::vector<double> grid;
  for (int i = 0; i <= 49; ++i) grid.push_back(0.1 + 0.1 * i);
  const auto r = invert_laplace_cdf([](cd s) { return 1.0 / (1.0 + s); }, grid);
  EXPECT_FALSE(r.diverged()) << r.diagnostic;
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(r.values[i], 1 - std::exp(-grid[i]), 1e-6) << grid[i];
}

TEST(EulerInversion, RawInversion) {
  // F(s) = 1/(s+1)^2 is the transform of t e^{-t}.
  for (const double t : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(euler_invert([](cd s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, t), t * std::exp(-t), 1e-7);
  }
}

TEST(EulerInversion, SurvivalTarget) {
  const std::vector<double> grid{0.5, 1, 2};
  const auto r = invert_laplace_cdf([](cd s) { return 1.0 / (1.0 + s); }, grid, {}, InversionTarget::survival);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(r.values[i], std::exp(-grid[i]), 1e-6);
}

TEST(EulerInversion, PointMassStep) {
  std::vector<double> grid;
  for (int i = 1; i <= 40; ++i) grid.push_back(0.05 * i);
  const auto r = invert_laplace_cdf([](cd s) { return std::exp(-s); }, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ASSERT_GE(r.values[i], 0.0);
    ASSERT_LE(r.values[i], 1.0);
    if (i > 0) {
      ASSERT_GE(r.values[i], r.values[i - 1]);
    }
    if (grid[i] <= 0.8) {
      EXPECT_LT(r.values[i], 0.05) << grid[i];
    }
    if (grid[i] >= 1.2) {
      EXPECT_GT(r.values[i], 0.95) << grid[i];
    }
  }
  // Gibbs-type oscillation around the jump is caught by the two-precision check.
  EXPECT_TRUE(r.diverged());
}

TEST(EulerInversion, RejectsBadInput) {
  const std::vector<double> bad{1.0, 0.5};
  EXPECT_THROW(invert_laplace_cdf([](cd s) { return 1.0 / (1.0 + s); }, bad), std::invalid_argument);
  EXPECT_THROW(euler_invert([](cd s) { return 1.0 / (1.0 + s); }, 1.0, 7), std::invalid_argument);
}

// The inverted cycle transform against Monte Carlo of the cycle itself:
// critical binary offspring, no migration while positive, heavy-tailed
// initial level with rho = 0.9.
TEST(EulerInversion, PhiAgainstCycleSimulation) {
  const double rho = 0.9;
  const auto law = cycle_rho_limit_law(0.0, rho);
  ProcessConfig c;
  c.offspring = OffspringLaw::binary();
  c.migration = MigrationParams{0, 1, 0};
  const auto level = IntegerLaw::heavy_tail(rho);
  const std::int64_t t = 4000;
  const double bt = c.b() * static_cast<double>(t);
  std::vector<double> survivors;
  for (std::uint64_t i = 0; survivors.size() < 5000; ++i) {
    RngStream rng(21, i);
    const auto start = sample_integer_positive(level, rng);
    const auto v = stopped_value_at(c, start, t, rng);
    if (v > 0) survivors.push_back(static_cast<double>(v) / bt);
  }
  EXPECT_LE(ks_distance(EmpiricalDistribution(survivors), law), 0.05);
}
