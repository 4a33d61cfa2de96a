#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "branchregen/laws.hpp"
#include "branchregen/rng.hpp"
#include "branchregen/samplers.hpp"

namespace branchregen {

/// Default hard cap on the length of a single simulated cycle.
inline constexpr std::int64_t kDefaultCycleCap = 10'000'000;

/// Offspring and migration laws of a critical branching process with
/// randomly controlled migration, plus the initial population.
struct ProcessConfig {
  OffspringLaw offspring = OffspringLaw::binary();
  MigrationParams migration{};
  std::int64_t initial = 0;

  double b() const noexcept { return offspring.b(); }
  double theta() const noexcept { return migration.theta(b()); }
  /// Up-period tail exponent (1 - theta) v 0.
  double beta() const noexcept { return std::max(1.0 - theta(), 0.0); }
  /// Throws LawError when any component is invalid.
  void validate() const;
};

struct Trajectory {
  std::vector<std::int64_t> values;

  std::int64_t operator[](std::size_t t) const { return values[t]; }
  std::size_t size() const noexcept { return values.size(); }
};

/// One excursion of the stopped-at-zero chain.
struct CycleRecord {
  std::int64_t lifetime = 0;       // T_u, or the cap when truncated
  Trajectory path;                 // values at 0..lifetime
  std::int64_t initial_level = 0;
  bool truncated = false;          // still positive when the cap was reached
};

/// Down and up durations of an alternating renewal sequence and the
/// partial sums S_n of T_j = T_{d,j} + T_{u,j}.
struct RenewalSkeleton {
  std::vector<std::int64_t> down_durations;
  std::vector<std::int64_t> up_durations;
  std::vector<std::int64_t> partial_sums;  // S_0 = 0, S_1, ..., S_n
  /// The last up-period was cut at the horizon (or at the cycle cap); its
  /// recorded duration is a lower bound.
  bool last_censored = false;

  /// N(t) = max{n >= 0 : S_n <= t}.
  std::int64_t renewal_count(std::int64_t t) const;
};

/// A process config, a down-period law and the simulation horizon.
struct RegenerativeConfig {
  ProcessConfig process{};
  DownPeriodLaw down = DownPeriodLaw::geometric(0.5);
  std::int64_t horizon = 1;
  std::int64_t cycle_cap = kDefaultCycleCap;

  /// Rejects horizon < 1, cap < horizon, and configs whose cycles cannot
  /// start (P(I^o > 0) = 0).
  void validate() const;
};

/// One generation of the migration chain:
/// max{X_1 + ... + X_Y + M, 0} with M = M^+ if Y > 0 and M = M^o if Y = 0.
std::int64_t step_migration(std::int64_t current, const ProcessConfig& config, RngStream& rng);

/// Generation step of the chain stopped at zero: zero stays zero.
std::int64_t step_stopped(std::int64_t current, const ProcessConfig& config, RngStream& rng);

/// Y_0..Y_horizon started at config.initial.
Trajectory simulate_path(const ProcessConfig& config, std::int64_t horizon, RngStream& rng);

/// Runs the stopped chain from `initial_level` until it hits zero or `cap`
/// steps have elapsed, recording the path.
CycleRecord simulate_stopped_cycle(const ProcessConfig& config, std::int64_t initial_level,
                                   std::int64_t cap, RngStream& rng);

struct CycleOutcome {
  std::int64_t lifetime = 0;
  bool truncated = false;
};

/// Lifetime-only variant of simulate_stopped_cycle; does not store the path.
CycleOutcome simulate_cycle_lifetime(const ProcessConfig& config, std::int64_t initial_level,
                                     std::int64_t cap, RngStream& rng);

/// Value of the stopped chain at generation t (zero if it died earlier).
std::int64_t stopped_value_at(const ProcessConfig& config, std::int64_t initial_level,
                              std::int64_t t, RngStream& rng);

/// Alternately draws down-periods and cycles until S_n exceeds the horizon.
RenewalSkeleton build_renewal_skeleton(const RegenerativeConfig& regen, RngStream& rng);

/// sigma(t) = t - S_{N(t)} - T_{d,N(t)+1}: negative while down, the age of
/// the current up-period otherwise.
std::int64_t sigma_offset(const RenewalSkeleton& skeleton, std::int64_t t);

struct RegenerativePath {
  Trajectory z;
  RenewalSkeleton skeleton;
  bool truncated = false;
};

/// Z_0..Z_horizon: zero while sigma(t) < 0, the current cycle at age
/// sigma(t) otherwise.
RegenerativePath assemble_regenerative(const RegenerativeConfig& regen, RngStream& rng);

/// Deterministic assembly from a given skeleton and cycle paths; cycle j
/// supplies path values for ages 0..T_{u,j}-1.
Trajectory assemble_from_parts(const RenewalSkeleton& skeleton,
                               std::span<const Trajectory> cycle_paths, std::int64_t horizon);

/// Streams Z_0..Z_horizon to `visit(t, value)` without storing the path.
/// Returns true if any cycle hit the cap.
bool walk_regenerative(const RegenerativeConfig& regen, RngStream& rng,
                       const std::function<void(std::int64_t, std::int64_t)>& visit);

/// Values of Z at the requested generations (sorted ascending).
std::vector<std::int64_t> regenerative_values_at(const RegenerativeConfig& regen,
                                                 std::span<const std::int64_t> times,
                                                 RngStream& rng);

/// Values of the migration chain Y at the requested generations (sorted
/// ascending), started at config.initial.
std::vector<std::int64_t> path_values_at(const ProcessConfig& config,
                                         std::span<const std::int64_t> times, RngStream& rng);

}  // namespace branchregen
