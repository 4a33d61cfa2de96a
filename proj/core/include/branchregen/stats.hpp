#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "branchregen/laws.hpp"
#include "branchregen/limits.hpp"
#include "branchregen/process.hpp"

namespace branchregen {

/// Sorted sample with a right-continuous ECDF.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  /// (#samples <= x) / count
  double ecdf(double x) const;
  /// (#samples < x) / count
  double ecdf_left(double x) const;
  std::size_t count() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const std::vector<double>& samples() const noexcept { return samples_; }
  double mean() const;

 private:
  std::vector<double> samples_;
};

/// sup_x |F_n(x) - F(x)|, checked on both sides of every sample point so
/// laws with atoms are handled exactly. Rejects an empty sample.
double ks_distance(const EmpiricalDistribution& empirical, const LimitLaw& law);

/// sup_x |F_n(x) - G_m(x)| between two samples.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

enum class TailMethod { log_log_regression, hill };

struct TailEstimate {
  double exponent = 0.0;
  double standard_error = 0.0;
  TailMethod method = TailMethod::log_log_regression;
  std::size_t sample_count = 0;
  double range_low = 0.0;   // regression window, or Hill threshold
  double range_high = 0.0;
  /// False when the two halves of the regression window disagree on the
  /// slope by more than 25%, the signature of a lighter-than-power tail.
  bool power_tail = true;
};

struct TailOptions {
  /// Regression window [low, high]. Default: the decade ending at the
  /// 100th largest sample.
  std::optional<std::pair<double, double>> range;
  /// Hill: fraction of the sample in the upper tail.
  double hill_fraction = 0.01;
};

/// Exponent kappa of P(T > t) ~ t^{-kappa}. Needs at least 1000 samples.
TailEstimate tail_exponent_estimate(std::span<const double> samples, TailMethod method,
                                    const TailOptions& options = {});

double compute_theta(const MigrationParams& params, double b);

enum class Recurrence { non_recurrent, null_recurrent, positive_recurrent, boundary };

Recurrence classify_recurrence(double theta);
std::string to_string(Recurrence r);

enum class MarginalTransform { identity, divide_by_bt, log_over_log_t };

std::string to_string(MarginalTransform t);
MarginalTransform marginal_transform_from_string(const std::string& name);

struct MarginalSample {
  EmpiricalDistribution distribution;
  double survival_fraction = 0.0;  // share of replications with Z_t > 0
  std::size_t zero_count = 0;
  std::size_t total = 0;
};

/// Transformed marginal at generation t. divide_by_bt needs b > 0;
/// log_over_log_t needs t > 1 and always drops zeros (they map to -inf),
/// reporting them in zero_count.
MarginalSample marginal_at(std::span<const std::int64_t> values_at_t, std::int64_t t,
                           MarginalTransform transform, bool condition_on_positive, double b = 1.0);

MarginalSample marginal_at(std::span<const Trajectory> trajectories, std::int64_t t,
                           MarginalTransform transform, bool condition_on_positive, double b = 1.0);

}  // namespace branchregen
