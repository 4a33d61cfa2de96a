#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "branchregen/process.hpp"
#include "branchregen/stats.hpp"

using namespace branchregen;

namespace {

ProcessConfig critical(std::int64_t initial = 1) {
  ProcessConfig c;
  c.offspring = OffspringLaw::binary();
  c.migration = MigrationParams{0, 1, 0};
  c.initial = initial;
  return c;
}

ProcessConfig unit_offspring(MigrationParams m, std::int64_t initial) {
  ProcessConfig c;
  c.offspring = OffspringLaw::degenerate_unit();
  c.migration = std::move(m);
  c.initial = initial;
  return c;
}

RenewalSkeleton deterministic_skeleton(std::int64_t down, std::int64_t up, int n) {
  RenewalSkeleton s;
  s.partial_sums.push_back(0);
  for (int i = 0; i < n; ++i) {
    s.down_durations.push_back(down);
    s.up_durations.push_back(up);
    s.partial_sums.push_back(s.partial_sums.back() + down + up);
  }
  return s;
}

}  // namespace

TEST(StepMigration, HandExamples) {
  RngStream rng(1, 0);
  EXPECT_EQ(step_migration(0, unit_offspring({0, 1, 0}, 0), rng), 0);
  MigrationParams jump{0, 0, 1};
  jump.immigration_zero = IntegerLaw::constant(5);
  EXPECT_EQ(step_migration(0, unit_offspring(jump, 0), rng), 5);
  MigrationParams em{1, 0, 0};
  em.fam_emigration = IntegerLaw::constant(1);
  em.ind_emigration = IntegerLaw::constant(1);
  EXPECT_EQ(step_migration(3, unit_offspring(em, 3), rng), 1);
  // The barrier max{., 0}.
  em.ind_emigration = IntegerLaw::constant(10);
  EXPECT_EQ(step_migration(3, unit_offspring(em, 3), rng), 0);
}

TEST(StepStopped, ZeroIsAbsorbing) {
  MigrationParams jump{0, 0, 1};
  jump.immigration_zero = IntegerLaw::constant(5);
  RngStream rng(1, 0);
  EXPECT_EQ(step_stopped(0, unit_offspring(jump, 0), rng), 0);
}

TEST(SimulatePath, DeterministicCases) {
  RngStream rng(2, 0);
  const auto constant = simulate_path(unit_offspring({0, 1, 0}, 7), 50, rng);
  ASSERT_EQ(constant.size(), 51u);
  for (std::size_t t = 0; t < constant.size(); ++t) EXPECT_EQ(constant[t], 7);
  const auto zero = simulate_path(critical(0), 50, rng);
  for (std::size_t t = 0; t < zero.size(); ++t) EXPECT_EQ(zero[t], 0);
  EXPECT_THROW(simulate_path(critical(), 0, rng), std::invalid_argument);
}

// Critical branching without migration is a martingale: E Y_t = Y_0.
TEST(SimulatePath, CriticalMartingale) {
  const int n = 100'000;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    RngStream rng(3, static_cast<std::uint64_t>(i));
    s += static_cast<double>(simulate_path(critical(1), 50, rng)[50]);
  }
  // Var Y_50 = 50 * 2b = 50.
  EXPECT_NEAR(s / n, 1.0, 0.05);
  EXPECT_LT(std::abs(s / n - 1.0), 4 * std::sqrt(50.0 / n));
}

TEST(SimulatePath, NonnegativeWithEmigration) {
  ProcessConfig c;
  c.offspring = OffspringLaw::shifted_geometric();
  c.migration = MigrationParams{0.5, 0.25, 0.25, IntegerLaw::constant(1)};
  c.migration.ind_emigration = IntegerLaw::constant(3);
  c.migration.immigration_zero = IntegerLaw::constant(2);
  c.initial = 4;
  for (std::uint64_t i = 0; i < 200; ++i) {
    RngStream rng(4, i);
    const auto p = simulate_path(c, 500, rng);
    ASSERT_TRUE(std::all_of(p.values.begin(), p.values.end(), [](auto v) { return v >= 0; }));
  }
}

TEST(StoppedCycle, StructureHolds) {
  ProcessConfig c = critical();
  c.migration = MigrationParams{0, 0.8, 0.2, IntegerLaw::constant(1)};
  for (std::uint64_t i = 0; i < 2000; ++i) {
    RngStream rng(5, i);
    const auto rec = simulate_stopped_cycle(c, 3, 100'000, rng);
    ASSERT_EQ(rec.path[0], 3);
    if (rec.truncated) continue;
    ASSERT_EQ(rec.path.size(), static_cast<std::size_t>(rec.lifetime) + 1);
    for (std::int64_t t = 1; t < rec.lifetime; ++t) ASSERT_GT(rec.path[static_cast<std::size_t>(t)], 0);
    ASSERT_EQ(rec.path[static_cast<std::size_t>(rec.lifetime)], 0);
  }
}

TEST(StoppedCycle, TruncatedAtCap) {
  RngStream rng(6, 0);
  const auto rec = simulate_stopped_cycle(unit_offspring({0, 1, 0}, 1), 1, 25, rng);
  EXPECT_TRUE(rec.truncated);
  EXPECT_EQ(rec.lifetime, 25);
  const auto o = simulate_cycle_lifetime(unit_offspring({0, 1, 0}, 1), 1, 25, rng);
  EXPECT_TRUE(o.truncated);
  EXPECT_EQ(o.lifetime, 25);
}

// Kolmogorov: P(T_u > t) ~ 1/(bt) for critical binary offspring from one
// ancestor. For P(0)=P(2)=1/2 the exact survival obeys
// s_{t+1} = s_t - s_t^2/2, which serves as the oracle at t = 100.
TEST(StoppedCycle, KolmogorovSurvival) {
  double s = 1.0;
  for (int t = 0; t < 100; ++t) s -= s * s / 2.0;
  EXPECT_NEAR(s, 2.0 / 100, 0.002);
  const int n = 1'000'000;
  int over = 0;
  for (int i = 0; i < n; ++i) {
    RngStream rng(7, static_cast<std::uint64_t>(i));
    over += simulate_cycle_lifetime(critical(), 1, 101, rng).lifetime > 100;
  }
  EXPECT_NEAR(static_cast<double>(over) / n, s, 3 * std::sqrt(s * (1 - s) / n));
}

TEST(StoppedValue, MatchesCycle) {
  ProcessConfig c = critical();
  for (std::uint64_t i = 0; i < 200; ++i) {
    RngStream a(8, i), b(8, i);
    const auto rec = simulate_stopped_cycle(c, 4, 1000, a);
    const auto v = stopped_value_at(c, 4, 30, b);
    const auto expected = rec.lifetime >= 30 ? rec.path[30] : 0;
    EXPECT_EQ(v, expected);
  }
}

TEST(RenewalSkeleton, DeterministicArithmetic) {
  const auto s = deterministic_skeleton(2, 3, 4);
  for (std::size_t n = 0; n < s.partial_sums.size(); ++n) EXPECT_EQ(s.partial_sums[n], 5 * static_cast<std::int64_t>(n));
  EXPECT_EQ(s.renewal_count(7), 1);
  EXPECT_EQ(s.renewal_count(0), 0);
  EXPECT_EQ(s.renewal_count(5), 1);
  EXPECT_EQ(s.renewal_count(4), 0);
  EXPECT_EQ(sigma_offset(s, 6), -1);
  EXPECT_EQ(sigma_offset(s, 7), 0);
}

TEST(RenewalSkeleton, SigmaFirstCycle) {
  const auto s = deterministic_skeleton(4, 3, 2);
  EXPECT_EQ(sigma_offset(s, 2), -2);
  EXPECT_EQ(sigma_offset(s, 4), 0);
  EXPECT_EQ(sigma_offset(s, 6), 2);
}

TEST(RenewalSkeleton, SimulatedInvariants) {
  RegenerativeConfig rc;
  rc.process = critical();
  rc.process.migration = MigrationParams{0.5, 0.25, 0.25, IntegerLaw::constant(1)};
  rc.process.migration.ind_emigration = IntegerLaw::constant(1);
  rc.process.migration.immigration_zero = IntegerLaw::constant(1);
  rc.down = DownPeriodLaw::geometric(0.5);
  rc.horizon = 200'000;
  RngStream rng(9, 0);
  const auto s = build_renewal_skeleton(rc, rng);
  ASSERT_EQ(s.partial_sums.front(), 0);
  for (std::size_t i = 1; i < s.partial_sums.size(); ++i) ASSERT_GT(s.partial_sums[i], s.partial_sums[i - 1]);
  std::int64_t prev = 0;
  for (std::int64_t t = 0; t < 2000; ++t) {
    const auto n = s.renewal_count(t);
    ASSERT_GE(n, prev);
    prev = n;
  }
  EXPECT_EQ(s.renewal_count(0), 0);
  double sum = 0;
  for (auto d : s.down_durations) sum += static_cast<double>(d);
  EXPECT_NEAR(sum / static_cast<double>(s.down_durations.size()), 2.0, 0.05);
}

TEST(Assemble, LongDownPeriodIsZero) {
  RegenerativeConfig rc;
  rc.process = critical();
  rc.process.migration = MigrationParams{0, 0, 1};
  rc.process.migration.immigration_zero = IntegerLaw::constant(1);
  rc.down = DownPeriodLaw::deterministic(1000);
  rc.horizon = 500;
  RngStream rng(10, 0);
  const auto z = assemble_regenerative(rc, rng).z;
  ASSERT_EQ(z.size(), 501u);
  EXPECT_TRUE(std::all_of(z.values.begin(), z.values.end(), [](auto v) { return v == 0; }));
}

TEST(Assemble, FromParts) {
  const auto s = deterministic_skeleton(1, 2, 4);
  const std::vector<Trajectory> paths(4, Trajectory{{5, 3, 0}});
  const auto z = assemble_from_parts(s, paths, 9);
  EXPECT_EQ(z.values, (std::vector<std::int64_t>{0, 5, 3, 0, 5, 3, 0, 5, 3, 0}));
}

TEST(Assemble, RejectsDegenerateConfig) {
  RegenerativeConfig rc;
  rc.process = critical();
  rc.horizon = 10;
  RngStream rng(1, 0);
  EXPECT_THROW(assemble_regenerative(rc, rng), LawError);
  rc.process.migration = MigrationParams{0, 0.5, 0.5};
  rc.process.migration.immigration_zero = IntegerLaw::constant(1);
  rc.process.offspring = OffspringLaw::degenerate_unit();
  EXPECT_THROW(assemble_regenerative(rc, rng), LawError);
}

TEST(Assemble, WalkAndValuesAgree) {
  RegenerativeConfig rc;
  rc.process = critical();
  rc.process.migration = MigrationParams{0, 0.8, 0.2, IntegerLaw::constant(1)};
  rc.process.migration.immigration_zero = IntegerLaw::constant(2);
  rc.down = DownPeriodLaw::geometric(0.3);
  rc.horizon = 300;
  const std::vector<std::int64_t> times{0, 10, 150, 300};
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream a(11, i), b(11, i), c(11, i);
    const auto z = assemble_regenerative(rc, a).z;
    const auto v = regenerative_values_at(rc, times, b);
    for (std::size_t k = 0; k < times.size(); ++k) EXPECT_EQ(v[k], z[static_cast<std::size_t>(times[k])]);
    std::vector<std::int64_t> walked(301, -1);
    walk_regenerative(rc, c, [&](std::int64_t t, std::int64_t value) { walked[static_cast<std::size_t>(t)] = value; });
    EXPECT_EQ(walked, z.values);
  }
}

TEST(PathValues, MatchSimulatePath) {
  ProcessConfig c = critical(3);
  c.migration = MigrationParams{0, 0.7, 0.3, IntegerLaw::constant(1)};
  c.migration.immigration_zero = IntegerLaw::constant(1);
  const std::vector<std::int64_t> times{1, 7, 40};
  for (std::uint64_t i = 0; i < 50; ++i) {
    RngStream a(12, i), b(12, i);
    const auto p = simulate_path(c, 40, a);
    const auto v = path_values_at(c, times, b);
    for (std::size_t k = 0; k < times.size(); ++k) EXPECT_EQ(v[k], p[static_cast<std::size_t>(times[k])]);
  }
}

// Restarting the chain at zero: with the native geometric downs the
// regenerative process has the law of Y started at 0.
TEST(Assemble, NativeDownsReproduceChainMarginal) {
  ProcessConfig c = critical(0);
  c.migration = MigrationParams{0, 0.85, 0.15, IntegerLaw::constant(1)};
  c.migration.immigration_zero = IntegerLaw::constant(1);
  RegenerativeConfig rc;
  rc.process = c;
  rc.down = native_down_period(c.migration);
  rc.horizon = 500;
  const int n = 10'000;
  std::vector<double> chain, regen;
  const std::vector<std::int64_t> t{500};
  for (int i = 0; i < n; ++i) {
    RngStream a(13, static_cast<std::uint64_t>(i)), b(14, static_cast<std::uint64_t>(i));
    chain.push_back(static_cast<double>(path_values_at(c, t, a)[0]));
    regen.push_back(static_cast<double>(regenerative_values_at(rc, t, b)[0]));
  }
  // Two-sample KS noise at n = 1e4 is about 0.019 at the 1% level.
  EXPECT_LT(ks_two_sample(EmpiricalDistribution(chain), EmpiricalDistribution(regen)), 1.63 * std::sqrt(2.0 / n));
}

TEST(LifetimeTail, ExponentOneMinusTheta) {
  for (const double theta : {0.0, 0.25}) {
    ProcessConfig c = critical();
    const double r = theta * c.b();
    c.migration = MigrationParams{0, 1 - r, r, IntegerLaw::constant(1)};
    const int n = 200'000;
    std::vector<double> life;
    for (int i = 0; i < n; ++i) {
      RngStream rng(15, static_cast<std::uint64_t>(i));
      life.push_back(static_cast<double>(simulate_cycle_lifetime(c, 1, 100'000, rng).lifetime));
    }
    TailOptions o;
    o.range = {{100.0, 10'000.0}};
    EXPECT_NEAR(tail_exponent_estimate(life, TailMethod::log_log_regression, o).exponent, 1 - theta, 0.1) << theta;
  }
}
