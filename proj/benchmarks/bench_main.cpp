#include <benchmark/benchmark.h>

#include <complex>
#include <cstdint>

#include "branchregen/laplace.hpp"
#include "branchregen/limits.hpp"
#include "branchregen/process.hpp"
#include "branchregen/quadrature.hpp"
#include "branchregen/rng.hpp"
#include "branchregen/samplers.hpp"
#include "branchregen/special.hpp"
#include "branchregen/transforms.hpp"

namespace {

using namespace branchregen;

void BM_Philox(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

void BM_Offspring(benchmark::State& state) {
  const auto law = OffspringLaw::binary();
  RngStream rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_offspring(law, rng));
}
BENCHMARK(BM_Offspring);

void BM_OffspringSum(benchmark::State& state) {
  const auto law = OffspringLaw::binary();
  const auto families = state.range(0);
  RngStream rng(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_offspring_sum(law, families, rng));
}
BENCHMARK(BM_OffspringSum)->RangeMultiplier(100)->Range(1, 1'000'000);

void BM_HeavyTail(benchmark::State& state) {
  RngStream rng(4, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_heavy_tail_integer(0.8, rng));
}
BENCHMARK(BM_HeavyTail);

void BM_StepMigration(benchmark::State& state) {
  ProcessConfig c;
  c.offspring = OffspringLaw::binary();
  c.migration = MigrationParams{0.25, 0.5, 0.25};
  c.migration.immigration_plus = IntegerLaw::constant(1);
  c.migration.immigration_zero = IntegerLaw::constant(1);
  c.migration.fam_emigration = IntegerLaw::constant(1);
  RngStream rng(5, 0);
  const auto level = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(step_migration(level, c, rng));
}
BENCHMARK(BM_StepMigration)->RangeMultiplier(100)->Range(1, 1'000'000);

void BM_SimulatePath(benchmark::State& state) {
  ProcessConfig c;
  c.offspring = OffspringLaw::binary();
  c.migration = MigrationParams{0.25, 0.5, 0.25};
  c.migration.immigration_plus = IntegerLaw::constant(1);
  c.migration.immigration_zero = IntegerLaw::constant(1);
  c.migration.fam_emigration = IntegerLaw::constant(1);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RngStream rng(6, i++);
    benchmark::DoNotOptimize(simulate_path(c, state.range(0), rng));
  }
}
BENCHMARK(BM_SimulatePath)->Arg(100)->Arg(1000);

void BM_IncompleteBeta(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(incomplete_beta_ratio(0.3, 0.2, 0.7));
}
BENCHMARK(BM_IncompleteBeta);

void BM_QuadSingular(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(quad_singular([](double u, double) { return std::pow(u, -0.5); }));
  }
}
BENCHMARK(BM_QuadSingular);

void BM_MainLimitCdf(benchmark::State& state) {
  const auto c = TailRatio::finite(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(main_limit_cdf(0.7, 0.25, c));
}
BENCHMARK(BM_MainLimitCdf);

void BM_EulerInvert(benchmark::State& state) {
  const ComplexTransform phi = [](std::complex<double> s) { return phi_laplace(s, 0.0, 0.9) / s; };
  for (auto _ : state) benchmark::DoNotOptimize(euler_invert(phi, 1.0));
}
BENCHMARK(BM_EulerInvert);

}  // namespace

BENCHMARK_MAIN();
