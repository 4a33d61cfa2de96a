#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "branchregen/experiment_config.hpp"
#include "branchregen/stats.hpp"

namespace branchregen {

/// One declared check of an experiment.
struct CheckOutcome {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CheckOutcome&, const CheckOutcome&) = default;
};

struct TailEstimateRecord {
  std::string name;
  std::string method;
  double exponent = 0.0;
  double standard_error = 0.0;
  double range_low = 0.0;
  double range_high = 0.0;
  std::int64_t sample_count = 0;
  bool power_tail = true;

  friend bool operator==(const TailEstimateRecord&, const TailEstimateRecord&) = default;
};

/// A named analytic or estimated reference value (means, atoms, tail ratios).
struct ReferenceValue {
  std::string name;
  double value = 0.0;

  friend bool operator==(const ReferenceValue&, const ReferenceValue&) = default;
};

struct ResultRecord {
  int schema_version = kConfigSchemaVersion;
  std::string experiment;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::int64_t replications = 0;
  double theta = 0.0;
  double b = 0.0;
  std::string recurrence;
  std::string c_regime;
  std::string target_law;
  std::string transform;
  bool conditional = false;

  std::vector<std::int64_t> horizons;
  /// Per horizon: KS distance to the target law, or the sup discrepancy to
  /// the stationary estimate for the stationary experiments. Empty for a
  /// custom run without a target law.
  std::vector<double> ks;
  std::vector<double> survival_fractions;
  std::vector<std::int64_t> sample_counts;
  std::vector<double> sample_means;

  std::vector<TailEstimateRecord> tail_estimates;
  std::vector<ReferenceValue> references;
  std::vector<CheckOutcome> checks;
  std::int64_t truncated_cycles = 0;
  double wall_seconds = 0.0;

  /// Transformed marginals per horizon and the reference CDF they were
  /// compared with; used for plot data, not serialized.
  std::vector<EmpiricalDistribution> marginals;
  std::function<double(double)> reference_cdf;

  bool all_passed() const;
  /// Throws std::out_of_range if no check has this name.
  const CheckOutcome& check(const std::string& name) const;

  /// Compares every serialized field.
  friend bool operator==(const ResultRecord& a, const ResultRecord& b) {
    return a.schema_version == b.schema_version && a.experiment == b.experiment &&
           a.config_digest == b.config_digest && a.seed == b.seed && a.replications == b.replications &&
           a.theta == b.theta && a.b == b.b && a.recurrence == b.recurrence && a.c_regime == b.c_regime &&
           a.target_law == b.target_law && a.transform == b.transform && a.conditional == b.conditional &&
           a.horizons == b.horizons && a.ks == b.ks && a.survival_fractions == b.survival_fractions &&
           a.sample_counts == b.sample_counts && a.sample_means == b.sample_means &&
           a.tail_estimates == b.tail_estimates && a.references == b.references && a.checks == b.checks &&
           a.truncated_cycles == b.truncated_cycles && a.wall_seconds == b.wall_seconds;
  }
};

/// Raised when more than max_truncated_fraction of the simulated cycles hit
/// the cycle cap.
class ExperimentAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs a validated config. Deterministic given (config, seed) apart from
/// wall_seconds; the worker count does not affect the result.
ResultRecord run_experiment(const ExperimentConfig& config);

/// The full path of replication `index` as simulated by run_experiment:
/// Y for chain experiments, Z for regenerative ones, the stopped chain for
/// cycle experiments.
Trajectory replication_trajectory(const ExperimentConfig& config, std::int64_t index);

/// Cycle-occupation discrepancy: sup over integers x of |F_n(x) - S(x)|.
double stationary_discrepancy(const EmpiricalDistribution& marginal,
                              const std::function<double(double)>& stationary_cdf, std::int64_t x_max);

}  // namespace branchregen
