#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace branchregen {

/// Thrown when a law or configuration violates its declared invariants.
class LawError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Largest value returned by the heavy-tail inversion samplers. Draws of
/// U^{-1/alpha} above it are clamped; for alpha <= 1 this happens with
/// probability below 2^{-25}, and keeps sums of offspring inside int64.
inline constexpr std::int64_t kHeavyTailClamp = std::int64_t{1} << 50;

enum class OffspringKind { binary, shifted_geometric, unit_poisson, tabulated };

/// A critical offspring distribution: mean exactly one, variance 2b > 0.
///
/// binary:            P(0) = P(2) = 1/2, b = 1/2
/// shifted_geometric: P(k) = 2^{-(k+1)}, k >= 0, b = 1
/// unit_poisson:      Poisson(1), b = 1/2
/// tabulated:         finite pmf on {0, ..., K}
class OffspringLaw {
 public:
  static OffspringLaw binary();
  static OffspringLaw shifted_geometric();
  static OffspringLaw unit_poisson();
  /// pmf[k] = P(X = k). Must sum to 1 within 1e-12 and have mean 1 within 1e-12.
  static OffspringLaw tabulated(std::vector<double> pmf);
  /// X = 1 almost surely. Not a valid critical law (b = 0, theta is
  /// undefined) and rejected by ProcessConfig::validate; the single-step and
  /// path functions accept it for hand-checkable runs.
  static OffspringLaw degenerate_unit();

  OffspringKind kind() const noexcept { return kind_; }
  double mean() const noexcept { return 1.0; }
  double variance() const noexcept { return variance_; }
  double b() const noexcept { return variance_ / 2.0; }
  /// Tabulated pmf; empty for the parametric kinds.
  const std::vector<double>& pmf() const noexcept { return pmf_; }

  /// All built-in laws have exponential or finite tails, so every moment
  /// E X^k, E X^2 log^2(1+X) and E X^{1-theta} required by the recurrence
  /// regime is finite.
  bool has_finite_moment(double order) const noexcept;

  std::string describe() const;

 private:
  OffspringLaw(OffspringKind kind, double variance, std::vector<double> pmf)
      : kind_(kind), variance_(variance), pmf_(std::move(pmf)) {}

  OffspringKind kind_;
  double variance_;
  std::vector<double> pmf_;
};

enum class IntegerLawKind { constant, poisson, tabulated, heavy_tail };

/// A law on the nonnegative integers used for immigration and emigration.
///
/// heavy_tail draws ceil((C/U)^{1/rho}) with U uniform on (0,1] and scale
/// C > 0, so P(X > t) = min(1, C floor(t)^{-rho}) for real t >= 1 and the
/// mean is infinite.
class IntegerLaw {
 public:
  static IntegerLaw constant(std::int64_t value);
  static IntegerLaw poisson(double mean);
  static IntegerLaw tabulated(std::vector<double> pmf);
  static IntegerLaw heavy_tail(double exponent, double scale = 1.0);

  IntegerLawKind kind() const noexcept { return kind_; }
  /// +infinity for heavy_tail.
  double mean() const noexcept;
  double prob_positive() const noexcept;
  bool bounded() const noexcept {
    return kind_ == IntegerLawKind::constant || kind_ == IntegerLawKind::tabulated;
  }
  /// Almost-sure upper bound; throws for unbounded laws.
  std::int64_t upper_bound() const;
  bool has_finite_moment(double order) const noexcept;

  std::int64_t value() const noexcept { return value_; }
  double rate() const noexcept { return rate_; }
  double exponent() const noexcept { return rate_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }

  std::string describe() const;

 private:
  IntegerLaw(IntegerLawKind kind, std::int64_t value, double rate, std::vector<double> pmf,
             double scale = 1.0)
      : kind_(kind), value_(value), rate_(rate), pmf_(std::move(pmf)), scale_(scale) {}

  IntegerLawKind kind_;
  std::int64_t value_ = 0;
  double rate_ = 0.0;  // Poisson mean or heavy-tail exponent
  std::vector<double> pmf_;
  double scale_ = 1.0;
};

enum class DownPeriodKind { geometric, heavy_tail, deterministic };

/// Law of the duration of a stay at zero, on {1, 2, ...}.
///
/// geometric:     P(T = k) = (1 - pi0)^{k-1} pi0
/// heavy_tail:    T = ceil((C/U)^{1/alpha}), P(T > t) = min(1, C floor(t)^{-alpha}) for C > 0,
///                alpha in (1/2, 1]
/// deterministic: T = k
class DownPeriodLaw {
 public:
  static DownPeriodLaw geometric(double success_probability);
  static DownPeriodLaw heavy_tail(double alpha, double scale = 1.0);
  static DownPeriodLaw deterministic(std::int64_t duration);

  DownPeriodKind kind() const noexcept { return kind_; }
  double success_probability() const noexcept { return param_; }
  double alpha() const noexcept { return param_; }
  std::int64_t duration() const noexcept { return duration_; }
  double scale() const noexcept { return scale_; }

  bool finite_mean() const noexcept { return kind_ != DownPeriodKind::heavy_tail; }
  double mean() const noexcept;
  /// Exact P(T > t).
  double survival(double t) const noexcept;
  /// lim t^alpha P(T > t); the scale C for heavy tails, 0 otherwise.
  double tail_constant() const noexcept { return kind_ == DownPeriodKind::heavy_tail ? scale_ : 0.0; }

  std::string describe() const;

 private:
  DownPeriodLaw(DownPeriodKind kind, double param, std::int64_t duration, double scale = 1.0)
      : kind_(kind), param_(param), duration_(duration), scale_(scale) {}

  DownPeriodKind kind_;
  double param_;
  std::int64_t duration_;
  double scale_;
};

/// The (p, q, r) migration switch and its component laws.
///
/// With probability p the generation loses fam_emigration families and
/// ind_emigration individuals, with q nothing happens, with r it receives
/// immigration_plus immigrants (from a positive state) or immigration_zero
/// immigrants (from zero).
struct MigrationParams {
  double p = 0.0;
  double q = 1.0;
  double r = 0.0;
  IntegerLaw immigration_plus = IntegerLaw::constant(0);
  IntegerLaw immigration_zero = IntegerLaw::constant(0);
  IntegerLaw fam_emigration = IntegerLaw::constant(0);
  IntegerLaw ind_emigration = IntegerLaw::constant(0);

  /// All violated invariants, empty when valid. `b` is the offspring b,
  /// needed to evaluate the moment conditions of the theta regime.
  std::vector<std::string> violations(double b) const;
  /// Throws LawError listing every violation.
  void validate(double b) const;

  /// E M^+ with E X = 1: r E[I+] - p (E[famE] + E[indE]).
  double mean_migration_plus() const noexcept;
  double theta(double b) const noexcept { return mean_migration_plus() / b; }
};

/// Geometric down-period induced by the chain itself: pi0 = r P(I^o > 0).
DownPeriodLaw native_down_period(const MigrationParams& migration);

}  // namespace branchregen
