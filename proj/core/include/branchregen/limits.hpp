#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "branchregen/laplace.hpp"
#include "branchregen/process.hpp"

namespace branchregen {

/// The limiting down-to-up tail ratio c = lim (1 - A(t)) / (1 - F(t)).
/// Infinity is a separate state, never a floating-point value.
class TailRatio {
 public:
  static TailRatio finite(double c);
  static TailRatio zero() { return finite(0.0); }
  static TailRatio infinite() { return TailRatio(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws std::domain_error when infinite.
  double value() const;
  std::string describe() const;

  friend bool operator==(const TailRatio&, const TailRatio&) = default;

 private:
  TailRatio(bool infinite, double c) : infinite_(infinite), c_(c) {}
  bool infinite_;
  double c_;
};

using CdfHandle = std::function<double(double)>;
using SurvivalHandle = std::function<double(double)>;

/// (c + G(x)) / (c + 1) with
/// G(x) = (1 / B(1-beta, beta)) int_0^1 D(x u^{-gamma}) u^{-beta} (1-u)^{beta-1} du.
/// Rejects an infinite c; the conditional variant covers that branch.
double brt_cdf_unconditional(double x, const CdfHandle& d, double beta, double gamma, TailRatio c);

/// (1 / B(1-beta, alpha)) int_0^1 D(x u^{-gamma}) u^{-beta} (1-u)^{alpha-1} du.
double brt_cdf_conditional(double x, const CdfHandle& d, double alpha, double beta, double gamma);

/// 1 - (1 / ((c+1) B(theta, 1-theta))) int_0^1 e^{-x/y} y^{theta-1} (1-y)^{-theta} dy,
/// theta in (0, 1/2), finite c.
double main_limit_cdf(double x, double theta, TailRatio c);

/// 1 - (1 / B(theta, alpha)) int_0^1 e^{-x/y} y^{theta-1} (1-y)^{alpha-1} dy.
double main_limit_cdf_conditional(double x, double theta, double alpha);

/// (c + x) / (c + 1) on [0, 1].
double log_scale_limit_cdf(double x, TailRatio c);

/// m_F(t) = int_0^t survival(x) dx, panelled at 1, 10, 100, ...; t may be +inf.
double m_F(double t, const SurvivalHandle& survival);

struct MeanEstimate {
  double value = 0.0;
  /// Analytic bound on the neglected integral of the survival function
  /// beyond the cut-off.
  double tail_bound = 0.0;
};

/// int_0^{x_max} survival(x) dx plus a caller-supplied tail bound.
MeanEstimate mean_from_survival(const SurvivalHandle& survival, double x_max, double tail_bound);

/// Cycle-occupation estimate of a stationary CDF:
/// (sum_j sum_{k < T_j} 1{value_j(k) <= x}) / (sum_j T_j).
/// Unconditional: T_j includes the down-period, during which the value is 0.
/// Conditional: only the up-periods count.
double stationary_cdf_estimate(std::span<const CycleRecord> cycles,
                               std::span<const std::int64_t> downs, double x, bool conditional);

// ---------------------------------------------------------------------------

struct GammaLaw {
  double theta;
};
struct UnitUniformLaw {};
struct ShiftedUniformLaw {
  double c;
};
struct ExpBetaMixtureLaw {
  double theta;
  double c;
};
struct ExpBetaMixtureConditionalLaw {
  double theta;
  double alpha;
};
struct BrtGenericLaw {
  CdfHandle d;
  std::string d_name;
  double beta;
  double gamma;
  /// Finite tail ratio for the unconditional form; infinite selects the
  /// conditional form with `alpha`.
  TailRatio c = TailRatio::zero();
  double alpha = 1.0;
};
/// A law known through its Laplace transform, tabulated on a log grid by
/// numerical inversion. An atom at zero is added separately.
struct TransformDefinedLaw {
  std::string name;
  double atom_at_zero = 0.0;
  std::vector<double> x;    // log-spaced grid
  std::vector<double> cdf;  // continuous part, including the atom
  std::string inversion_diagnostic;
};
struct PointMassLaw {
  double at;
};

/// An analytic limit law evaluable as a CDF.
class LimitLaw {
 public:
  using Variant = std::variant<GammaLaw, UnitUniformLaw, ShiftedUniformLaw, ExpBetaMixtureLaw,
                               ExpBetaMixtureConditionalLaw, BrtGenericLaw,
                               std::shared_ptr<const TransformDefinedLaw>, PointMassLaw>;

  static LimitLaw gamma(double theta);
  static LimitLaw exponential() { return gamma(1.0); }
  static LimitLaw unit_uniform();
  static LimitLaw shifted_uniform(TailRatio c);
  static LimitLaw exp_beta_mixture(double theta, TailRatio c);
  static LimitLaw exp_beta_mixture_conditional(double theta, double alpha);
  static LimitLaw brt_generic(BrtGenericLaw params);
  /// Inverts `transform` (a possibly defective transform of the continuous
  /// part) on a log grid over [x_min, x_max] and adds `atom_at_zero`.
  static LimitLaw transform_defined(std::string name, const ComplexTransform& transform,
                                    double atom_at_zero = 0.0, double x_min = 1e-6,
                                    double x_max = 1e4, int points = 241,
                                    const EulerInversionSpec& spec = {});
  static LimitLaw point_mass(double at);

  /// P(Z <= x).
  double cdf(double x) const;
  /// P(Z < x); differs from cdf only at atoms.
  double cdf_left(double x) const;
  /// Mass at zero.
  double atom_at_zero() const;
  std::string describe() const;
  const Variant& params() const noexcept { return params_; }

  /// Mean by integrating the survival function with an analytic tail bound.
  /// Throws std::domain_error for kinds without a known tail bound.
  MeanEstimate mean(double x_max = 60.0) const;

 private:
  explicit LimitLaw(Variant params) : params_(std::move(params)) {}
  Variant params_;
};

}  // namespace branchregen
