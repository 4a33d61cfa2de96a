#include "branchregen/process.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace branchregen {
namespace {

// Offspring of the first families are drawn one by one so that family
// emigration can remove them; the remaining families are summed in bulk.
std::int64_t step_positive(std::int64_t current, const ProcessConfig& config, RngStream& rng) {
  const auto& migration = config.migration;
  std::int64_t individual = 0;
  if (migration.p > 0.0) {
    individual = std::min(current, migration.fam_emigration.upper_bound());
  }

  std::array<std::int64_t, 64> small{};
  std::vector<std::int64_t> large;
  std::span<std::int64_t> draws;
  if (individual <= static_cast<std::int64_t>(small.size())) {
    draws = std::span<std::int64_t>(small.data(), static_cast<std::size_t>(individual));
  } else {
    large.resize(static_cast<std::size_t>(individual));
    draws = large;
  }

  std::int64_t offspring = 0;
  for (auto& x : draws) {
    x = sample_offspring(config.offspring, rng);
    offspring += x;
  }
  offspring += sample_offspring_sum(config.offspring, current - individual, rng);

  const std::int64_t m = sample_migration_plus(migration, config.offspring, draws, rng);
  return std::max<std::int64_t>(offspring + m, 0);
}

// Drives the alternating process up to the horizon. Either sink may be null.
bool run_regenerative(const RegenerativeConfig& regen, RngStream& rng,
                      const std::function<void(std::int64_t, std::int64_t)>* visit,
                      RenewalSkeleton* skeleton) {
  const auto& process = regen.process;
  bool truncated = false;
  std::int64_t t = 0;
  std::int64_t period_start = 0;
  if (skeleton) {
    *skeleton = RenewalSkeleton{};
    skeleton->partial_sums.push_back(0);
  }
  while (t <= regen.horizon) {
    const std::int64_t down = sample_down_period(regen.down, rng);
    if (skeleton) skeleton->down_durations.push_back(down);
    if (visit) {
      const std::int64_t end = std::min(regen.horizon + 1, t + std::min(down, regen.horizon + 1));
      for (; t < end; ++t) (*visit)(t, 0);
    }
    t = period_start + down;
    if (t > regen.horizon) break;

    std::int64_t y = sample_integer_positive(process.migration.immigration_zero, rng);
    std::int64_t age = 0;
    bool ended = false;
    while (t <= regen.horizon) {
      if (visit) (*visit)(t, y);
      ++t;
      ++age;
      if (age >= regen.cycle_cap) {
        truncated = true;
        break;
      }
      y = step_stopped(y, process, rng);
      if (y == 0) {
        ended = true;
        break;
      }
    }
    if (skeleton) {
      skeleton->up_durations.push_back(age);
      skeleton->partial_sums.push_back(period_start + down + age);
      if (!ended) skeleton->last_censored = true;
    }
    period_start += down + age;
    t = period_start;
    if (!ended) break;
  }
  return truncated;
}

}  // namespace

void ProcessConfig::validate() const {
  if (!(offspring.variance() > 0.0)) throw LawError("process: offspring variance must be positive");
  migration.validate(b());
  if (initial < 0) throw LawError("process: initial population must be nonnegative");
}

std::int64_t RenewalSkeleton::renewal_count(std::int64_t t) const {
  const auto it = std::upper_bound(partial_sums.begin(), partial_sums.end(), t);
  return static_cast<std::int64_t>(it - partial_sums.begin()) - 1;
}

void RegenerativeConfig::validate() const {
  process.validate();
  if (horizon < 1) throw LawError("regenerative: horizon must be >= 1");
  if (cycle_cap < horizon) throw LawError("regenerative: cycle cap must be >= horizon");
  if (!(process.migration.immigration_zero.prob_positive() > 0.0)) {
    throw LawError("regenerative: immigration at zero must be positive with positive probability");
  }
}

std::int64_t step_migration(std::int64_t current, const ProcessConfig& config, RngStream& rng) {
  if (current <= 0) return sample_migration_zero(config.migration, rng);
  return step_positive(current, config, rng);
}

std::int64_t step_stopped(std::int64_t current, const ProcessConfig& config, RngStream& rng) {
  if (current <= 0) return 0;
  return step_positive(current, config, rng);
}

Trajectory simulate_path(const ProcessConfig& config, std::int64_t horizon, RngStream& rng) {
  if (horizon < 1) throw std::invalid_argument("simulate_path: horizon must be >= 1");
  Trajectory out;
  out.values.reserve(static_cast<std::size_t>(horizon) + 1);
  std::int64_t y = config.initial;
  out.values.push_back(y);
  for (std::int64_t t = 0; t < horizon; ++t) {
    y = step_migration(y, config, rng);
    out.values.push_back(y);
  }
  return out;
}

CycleRecord simulate_stopped_cycle(const ProcessConfig& config, std::int64_t initial_level,
                                   std::int64_t cap, RngStream& rng) {
  if (initial_level < 1) throw std::invalid_argument("cycle: initial level must be >= 1");
  if (cap < 1) throw std::invalid_argument("cycle: cap must be >= 1");
  CycleRecord rec;
  rec.initial_level = initial_level;
  std::int64_t y = initial_level;
  rec.path.values.push_back(y);
  while (y > 0) {
    if (rec.lifetime >= cap) {
      rec.truncated = true;
      return rec;
    }
    y = step_stopped(y, config, rng);
    ++rec.lifetime;
    rec.path.values.push_back(y);
  }
  return rec;
}

CycleOutcome simulate_cycle_lifetime(const ProcessConfig& config, std::int64_t initial_level,
                                     std::int64_t cap, RngStream& rng) {
  if (initial_level < 1) throw std::invalid_argument("cycle: initial level must be >= 1");
  CycleOutcome out;
  std::int64_t y = initial_level;
  while (y > 0) {
    if (out.lifetime >= cap) {
      out.truncated = true;
      return out;
    }
    y = step_stopped(y, config, rng);
    ++out.lifetime;
  }
  return out;
}

std::int64_t stopped_value_at(const ProcessConfig& config, std::int64_t initial_level,
                              std::int64_t t, RngStream& rng) {
  std::int64_t y = initial_level;
  for (std::int64_t s = 0; s < t && y > 0; ++s) y = step_stopped(y, config, rng);
  return y;
}

RenewalSkeleton build_renewal_skeleton(const RegenerativeConfig& regen, RngStream& rng) {
  RenewalSkeleton skeleton;
  run_regenerative(regen, rng, nullptr, &skeleton);
  return skeleton;
}

std::int64_t sigma_offset(const RenewalSkeleton& skeleton, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("sigma_offset: t must be nonnegative");
  const std::int64_t n = skeleton.renewal_count(t);
  if (n >= static_cast<std::int64_t>(skeleton.down_durations.size())) {
    throw std::out_of_range("sigma_offset: t = " + std::to_string(t) +
                            " lies beyond the simulated skeleton");
  }
  return t - skeleton.partial_sums[static_cast<std::size_t>(n)] -
         skeleton.down_durations[static_cast<std::size_t>(n)];
}

RegenerativePath assemble_regenerative(const RegenerativeConfig& regen, RngStream& rng) {
  regen.validate();
  RegenerativePath out;
  out.z.values.assign(static_cast<std::size_t>(regen.horizon) + 1, 0);
  const std::function<void(std::int64_t, std::int64_t)> visit =
      [&](std::int64_t t, std::int64_t v) { out.z.values[static_cast<std::size_t>(t)] = v; };
  out.truncated = run_regenerative(regen, rng, &visit, &out.skeleton);
  return out;
}

Trajectory assemble_from_parts(const RenewalSkeleton& skeleton,
                               std::span<const Trajectory> cycle_paths, std::int64_t horizon) {
  Trajectory z;
  z.values.reserve(static_cast<std::size_t>(horizon) + 1);
  for (std::int64_t t = 0; t <= horizon; ++t) {
    const std::int64_t sigma = sigma_offset(skeleton, t);
    if (sigma < 0) {
      z.values.push_back(0);
      continue;
    }
    const auto n = static_cast<std::size_t>(skeleton.renewal_count(t));
    if (n >= cycle_paths.size()) throw std::out_of_range("assemble_from_parts: missing cycle path");
    const auto& path = cycle_paths[n].values;
    z.values.push_back(static_cast<std::size_t>(sigma) < path.size()
                           ? path[static_cast<std::size_t>(sigma)]
                           : 0);
  }
  return z;
}

bool walk_regenerative(const RegenerativeConfig& regen, RngStream& rng,
                       const std::function<void(std::int64_t, std::int64_t)>& visit) {
  return run_regenerative(regen, rng, &visit, nullptr);
}

std::vector<std::int64_t> regenerative_values_at(const RegenerativeConfig& regen,
                                                 std::span<const std::int64_t> times,
                                                 RngStream& rng) {
  std::vector<std::int64_t> out(times.size(), 0);
  if (times.empty()) return out;
  RegenerativeConfig local = regen;
  local.horizon = times.back();
  local.cycle_cap = std::max(local.cycle_cap, local.horizon);
  std::size_t next = 0;
  const std::function<void(std::int64_t, std::int64_t)> visit = [&](std::int64_t t,
                                                                    std::int64_t v) {
    while (next < times.size() && times[next] == t) out[next++] = v;
  };
  run_regenerative(local, rng, &visit, nullptr);
  return out;
}

std::vector<std::int64_t> path_values_at(const ProcessConfig& config,
                                         std::span<const std::int64_t> times, RngStream& rng) {
  std::vector<std::int64_t> out(times.size(), 0);
  std::size_t next = 0;
  std::int64_t y = config.initial;
  for (std::int64_t t = 0; next < times.size(); ++t) {
    while (next < times.size() && times[next] == t) out[next++] = y;
    y = step_migration(y, config, rng);
  }
  return out;
}

}  // namespace branchregen
