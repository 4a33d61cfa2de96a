#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "branchregen/limits.hpp"
#include "branchregen/process.hpp"
#include "branchregen/stats.hpp"

namespace branchregen {

/// Version of the configuration grammar understood by parse_config.
inline constexpr int kConfigSchemaVersion = 1;

enum class ExperimentKind {
  theorem_old_I,
  theorem_old_II,
  theorem_old_III,
  cycle_lifetime,
  theorem_main_Ia,
  theorem_main_Ib,
  theorem_main_II,
  theorem_main_III,
  theorem_rho_cycle,
  theorem_rho_II,
  custom,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();
/// One line describing what the experiment checks.
std::string experiment_summary(ExperimentKind kind);

enum class OutputFormat { json, csv, plot_data };

std::string to_string(OutputFormat format);
std::optional<OutputFormat> output_format_from_string(std::string_view name);

struct Tolerances {
  double ks = 0.05;
  double mean = 0.02;
  double tail_exponent = 0.1;
  double atom = 0.03;
  double stationary = 0.03;
};

enum class CustomGenerator { chain, regenerative, cycle };

/// Target law of a custom experiment.
struct CustomTarget {
  enum class Kind { none, gamma, exponential, unit_uniform, shifted_uniform, main, main_conditional, point_mass };
  Kind kind = Kind::none;
  double theta = 0.0;
  double alpha = 1.0;
  double at = 0.0;
  TailRatio c = TailRatio::zero();
};

struct CustomSpec {
  CustomGenerator generator = CustomGenerator::regenerative;
  MarginalTransform transform = MarginalTransform::divide_by_bt;
  bool condition_on_positive = false;
  CustomTarget target;
};

struct OutputSpec {
  std::string directory = "results";
  std::vector<OutputFormat> formats{OutputFormat::json};
  /// Replication whose full path is written as "t,value" CSV.
  std::optional<std::int64_t> trajectory;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  ExperimentKind experiment = ExperimentKind::custom;
  ProcessConfig process;
  /// Down-period law; empty means the chain's own geometric stay at zero.
  std::optional<DownPeriodLaw> down;
  std::vector<std::int64_t> horizons;
  std::int64_t replications = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Sample size of the cycle-based estimates (stationary law, lifetime
  /// tail, tail-constant ratio).
  std::int64_t cycles = 10'000;
  std::int64_t cycle_cap = kDefaultCycleCap;
  /// Share of capped cycles above which a run aborts.
  double max_truncated_fraction = 0.01;
  TailRatio c = TailRatio::zero();
  std::pair<double, double> tail_range{1e2, 1e4};
  Tolerances tolerances;
  CustomSpec custom;
  OutputSpec output;

  /// The down law in effect (the native geometric law when `down` is empty).
  DownPeriodLaw down_law() const;
  RegenerativeConfig regenerative() const;
  /// Tail exponent of the up-period: rho for heavy immigration at zero with
  /// theta + rho < 1, otherwise (1 - theta) v 0.
  double up_tail_exponent() const;
  /// Regime and range violations; empty when the config is runnable.
  std::vector<std::string> violations() const;
};

/// Thrown by parse_config; carries every violation found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Parses and validates a YAML config. Keys left out take the defaults of
/// the named experiment. Throws ConfigError listing all problems.
ExperimentConfig parse_config(const std::string& text);

/// Defaults of a named experiment, as YAML text.
std::string default_config_text(ExperimentKind kind);
ExperimentConfig default_config(ExperimentKind kind);

/// Canonical JSON of everything that determines the simulated values
/// (workers and output settings excluded).
std::string canonical_json(const ExperimentConfig& config);
/// 64-bit FNV-1a of canonical_json, as 16 hex digits.
std::string config_digest(const ExperimentConfig& config);

}  // namespace branchregen
