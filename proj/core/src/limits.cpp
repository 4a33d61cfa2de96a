#include "branchregen/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "branchregen/quadrature.hpp"
#include "branchregen/special.hpp"

namespace branchregen {
namespace {

QuadratureSpec cdf_quadrature() {
  QuadratureSpec spec;
  spec.abs_tolerance = 1e-13;
  spec.max_level = 12;
  return spec;
}

void require_unit_exponent(double v, const char* name, bool allow_one) {
  const bool ok = v > 0.5 && (allow_one ? v <= 1.0 : v < 1.0);
  if (!ok) {
    throw std::invalid_argument(std::string(name) + " must lie in (1/2, 1" + (allow_one ? "]" : ")"));
  }
}

void require_main_theta(double theta) {
  if (!(theta > 0.0 && theta < 0.5)) {
    throw std::invalid_argument("theta must lie in (0, 1/2)");
  }
}

// int_0^1 e^{-x/y} y^{theta-1} (1-y)^{a-1} dy
double exp_beta_integral(double x, double theta, double a) {
  auto spec = cdf_quadrature();
  spec.left_exponent = theta - 1.0;
  spec.right_exponent = a - 1.0;
  return quad_singular(
      [&](double y, double rest) {
        if (x > 0.0 && x / y > 745.0) return 0.0;
        return std::exp(-x / y) * std::pow(y, theta - 1.0) * std::pow(rest, a - 1.0);
      },
      spec);
}

double interpolate_transform_law(const TransformDefinedLaw& law, double x) {
  const auto& xs = law.x;
  const auto& fs = law.cdf;
  if (x < 0.0) return 0.0;
  const double atom = law.atom_at_zero;
  if (x == 0.0) return atom;
  if (x <= xs.front()) {
    // Power-law extrapolation of the continuous part towards the origin.
    const double f0 = fs[0] - atom;
    const double f1 = fs[1] - atom;
    if (f0 > 0.0 && f1 > f0) {
      const double k = std::log(f1 / f0) / std::log(xs[1] / xs[0]);
      return atom + f0 * std::pow(x / xs[0], k);
    }
    return atom + std::max(f0, 0.0) * x / xs[0];
  }
  if (x >= xs.back()) {
    const std::size_t n = xs.size();
    const double s0 = 1.0 - fs[n - 2];
    const double s1 = 1.0 - fs[n - 1];
    if (s1 > 0.0 && s0 > s1) {
      const double k = std::log(s0 / s1) / std::log(xs[n - 1] / xs[n - 2]);
      return 1.0 - s1 * std::pow(x / xs[n - 1], -k);
    }
    return fs[n - 1];
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double w = std::log(x / xs[i - 1]) / std::log(xs[i] / xs[i - 1]);
  return fs[i - 1] + w * (fs[i] - fs[i - 1]);
}

}  // namespace

TailRatio TailRatio::finite(double c) {
  if (!(c >= 0.0) || std::isinf(c)) {
    throw std::invalid_argument("tail ratio must be a finite nonnegative number; use TailRatio::infinite()");
  }
  return TailRatio(false, c);
}

double TailRatio::value() const {
  if (infinite_) throw std::domain_error("tail ratio is infinite; use the conditional limit law");
  return c_;
}

std::string TailRatio::describe() const {
  if (infinite_) return "infinite";
  std::ostringstream out;
  out << c_;
  return out.str();
}

double brt_cdf_unconditional(double x, const CdfHandle& d, double beta, double gamma, TailRatio c) {
  const double cv = c.value();
  require_unit_exponent(beta, "beta", false);
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (x < 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  auto spec = cdf_quadrature();
  spec.left_exponent = -beta;
  spec.right_exponent = beta - 1.0;
  const double g = quad_singular(
                       [&](double u, double rest) {
                         return d(x * std::pow(u, -gamma)) * std::pow(u, -beta) *
                                std::pow(rest, beta - 1.0);
                       },
                       spec) /
                   beta_function(1.0 - beta, beta);
  return (cv + g) / (cv + 1.0);
}

double brt_cdf_conditional(double x, const CdfHandle& d, double alpha, double beta, double gamma) {
  require_unit_exponent(alpha, "alpha", true);
  require_unit_exponent(beta, "beta", false);
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (x < 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  auto spec = cdf_quadrature();
  spec.left_exponent = -beta;
  spec.right_exponent = alpha - 1.0;
  return quad_singular(
             [&](double u, double rest) {
               return d(x * std::pow(u, -gamma)) * std::pow(u, -beta) * std::pow(rest, alpha - 1.0);
             },
             spec) /
         beta_function(1.0 - beta, alpha);
}

double main_limit_cdf(double x, double theta, TailRatio c) {
  const double cv = c.value();
  require_main_theta(theta);
  if (x < 0.0) return 0.0;
  if (x == 0.0) return cv / (cv + 1.0);
  if (std::isinf(x)) return 1.0;
  const double survival = exp_beta_integral(x, theta, 1.0 - theta) /
                          ((cv + 1.0) * beta_function(theta, 1.0 - theta));
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

double main_limit_cdf_conditional(double x, double theta, double alpha) {
  require_main_theta(theta);
  require_unit_exponent(alpha, "alpha", true);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double survival = exp_beta_integral(x, theta, alpha) / beta_function(theta, alpha);
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

double log_scale_limit_cdf(double x, TailRatio c) {
  const double cv = c.value();
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("log_scale_limit_cdf: x must lie in [0, 1]");
  return (cv + x) / (cv + 1.0);
}

double m_F(double t, const SurvivalHandle& survival) {
  if (std::isnan(t) || t < 0.0) throw std::invalid_argument("m_F: t must be nonnegative");
  if (t == 0.0) return 0.0;
  QuadratureSpec spec;
  spec.abs_tolerance = 1e-12;
  spec.rel_tolerance = 1e-12;
  spec.max_level = 12;
  double total = 0.0;
  double left = 0.0;
  double right = 1.0;
  while (left < t) {
    if (std::isinf(t) && right > 1e6) {
      // x = left / v maps (0, 1] onto [left, inf).
      total += quad_singular(
          [&](double v, double) {
            const double x = left / v;
            const double s = survival(x);
            return s == 0.0 ? 0.0 : s * left / (v * v);
          },
          spec);
      break;
    }
    const double upper = std::min(right, t);
    total += quad_interval(survival, left, upper, spec);
    left = upper;
    right *= 10.0;
  }
  return total;
}

MeanEstimate mean_from_survival(const SurvivalHandle& survival, double x_max, double tail_bound) {
  return {m_F(x_max, survival), tail_bound};
}

double stationary_cdf_estimate(std::span<const CycleRecord> cycles,
                               std::span<const std::int64_t> downs, double x, bool conditional) {
  if (cycles.empty()) throw std::invalid_argument("stationary_cdf_estimate: no cycles");
  if (!conditional && downs.size() != cycles.size()) {
    throw std::invalid_argument("stationary_cdf_estimate: need one down duration per cycle");
  }
  double hits = 0.0;
  double time = 0.0;
  for (std::size_t j = 0; j < cycles.size(); ++j) {
    const auto& cycle = cycles[j];
    if (cycle.truncated) throw std::invalid_argument("stationary_cdf_estimate: truncated cycle");
    for (std::int64_t k = 0; k < cycle.lifetime; ++k) {
      if (static_cast<double>(cycle.path.values[static_cast<std::size_t>(k)]) <= x) hits += 1.0;
    }
    time += static_cast<double>(cycle.lifetime);
    if (!conditional) {
      if (0.0 <= x) hits += static_cast<double>(downs[j]);
      time += static_cast<double>(downs[j]);
    }
  }
  return hits / time;
}

// ---------------------------------------------------------------------------

LimitLaw LimitLaw::gamma(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("gamma law: theta must be positive");
  return LimitLaw(GammaLaw{theta});
}

LimitLaw LimitLaw::unit_uniform() { return LimitLaw(UnitUniformLaw{}); }

LimitLaw LimitLaw::shifted_uniform(TailRatio c) { return LimitLaw(ShiftedUniformLaw{c.value()}); }

LimitLaw LimitLaw::exp_beta_mixture(double theta, TailRatio c) {
  require_main_theta(theta);
  return LimitLaw(ExpBetaMixtureLaw{theta, c.value()});
}

LimitLaw LimitLaw::exp_beta_mixture_conditional(double theta, double alpha) {
  require_main_theta(theta);
  require_unit_exponent(alpha, "alpha", true);
  return LimitLaw(ExpBetaMixtureConditionalLaw{theta, alpha});
}

LimitLaw LimitLaw::brt_generic(BrtGenericLaw params) {
  if (!params.d) throw std::invalid_argument("brt law: missing cycle limit cdf");
  require_unit_exponent(params.beta, "beta", false);
  if (params.c.is_infinite()) require_unit_exponent(params.alpha, "alpha", true);
  return LimitLaw(std::move(params));
}

LimitLaw LimitLaw::transform_defined(std::string name, const ComplexTransform& transform,
                                     double atom_at_zero, double x_min, double x_max, int points,
                                     const EulerInversionSpec& spec) {
  if (!(x_min > 0.0 && x_max > x_min) || points < 3) {
    throw std::invalid_argument("transform law: need 0 < x_min < x_max and at least 3 points");
  }
  if (!(atom_at_zero >= 0.0 && atom_at_zero < 1.0)) {
    throw std::invalid_argument("transform law: atom must lie in [0, 1)");
  }
  auto law = std::make_shared<TransformDefinedLaw>();
  law->name = std::move(name);
  law->atom_at_zero = atom_at_zero;
  law->x.resize(static_cast<std::size_t>(points));
  const double step = std::log(x_max / x_min) / (points - 1);
  for (int i = 0; i < points; ++i) law->x[static_cast<std::size_t>(i)] = x_min * std::exp(step * i);
  const auto inverted = invert_laplace_cdf(transform, law->x, spec);
  law->cdf.resize(law->x.size());
  double running = atom_at_zero;
  for (std::size_t i = 0; i < law->x.size(); ++i) {
    running = std::clamp(std::max(running, atom_at_zero + inverted.values[i]), 0.0, 1.0);
    law->cdf[i] = running;
  }
  law->inversion_diagnostic = inverted.diagnostic;
  return LimitLaw(std::shared_ptr<const TransformDefinedLaw>(std::move(law)));
}

LimitLaw LimitLaw::point_mass(double at) { return LimitLaw(PointMassLaw{at}); }

double LimitLaw::cdf(double x) const {
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaLaw>) {
          return gamma_cdf(x, p.theta);
        } else if constexpr (std::is_same_v<T, UnitUniformLaw>) {
          return std::clamp(x, 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, ShiftedUniformLaw>) {
          if (x < 0.0) return 0.0;
          return log_scale_limit_cdf(std::min(x, 1.0), TailRatio::finite(p.c));
        } else if constexpr (std::is_same_v<T, ExpBetaMixtureLaw>) {
          return main_limit_cdf(x, p.theta, TailRatio::finite(p.c));
        } else if constexpr (std::is_same_v<T, ExpBetaMixtureConditionalLaw>) {
          return main_limit_cdf_conditional(x, p.theta, p.alpha);
        } else if constexpr (std::is_same_v<T, BrtGenericLaw>) {
          if (p.c.is_infinite()) return brt_cdf_conditional(x, p.d, p.alpha, p.beta, p.gamma);
          return brt_cdf_unconditional(x, p.d, p.beta, p.gamma, p.c);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const TransformDefinedLaw>>) {
          return interpolate_transform_law(*p, x);
        } else {
          return x >= p.at ? 1.0 : 0.0;
        }
      },
      params_);
}

double LimitLaw::cdf_left(double x) const {
  if (const auto* pm = std::get_if<PointMassLaw>(&params_)) return x > pm->at ? 1.0 : 0.0;
  if (x == 0.0) return 0.0;
  return cdf(x);
}

double LimitLaw::atom_at_zero() const {
  if (const auto* pm = std::get_if<PointMassLaw>(&params_)) return pm->at == 0.0 ? 1.0 : 0.0;
  if (std::holds_alternative<UnitUniformLaw>(params_)) return 0.0;
  return cdf(0.0);
}

std::string LimitLaw::describe() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaLaw>) {
          out << "gamma(theta=" << p.theta << ")";
        } else if constexpr (std::is_same_v<T, UnitUniformLaw>) {
          out << "unit-uniform";
        } else if constexpr (std::is_same_v<T, ShiftedUniformLaw>) {
          out << "shifted-uniform(c=" << p.c << ")";
        } else if constexpr (std::is_same_v<T, ExpBetaMixtureLaw>) {
          out << "exp-beta-mixture(theta=" << p.theta << ", c=" << p.c << ")";
        } else if constexpr (std::is_same_v<T, ExpBetaMixtureConditionalLaw>) {
          out << "exp-beta-mixture-conditional(theta=" << p.theta << ", alpha=" << p.alpha << ")";
        } else if constexpr (std::is_same_v<T, BrtGenericLaw>) {
          out << "brt-generic(D=" << p.d_name << ", beta=" << p.beta << ", gamma=" << p.gamma;
          if (p.c.is_infinite()) {
            out << ", alpha=" << p.alpha << ")";
          } else {
            out << ", c=" << p.c.describe() << ")";
          }
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const TransformDefinedLaw>>) {
          out << "transform-defined(" << p->name << ")";
        } else {
          out << "point-mass(" << p.at << ")";
        }
      },
      params_);
  return out.str();
}

MeanEstimate LimitLaw::mean(double x_max) const {
  const auto survival = [this](double x) { return 1.0 - cdf(x); };
  return std::visit(
      [&](const auto& p) -> MeanEstimate {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GammaLaw>) {
          // int_X^inf Q(theta, x) dx <= theta Q(theta + 1, X).
          return mean_from_survival(survival, x_max, p.theta * (1.0 - gamma_cdf(x_max, p.theta + 1.0)));
        } else if constexpr (std::is_same_v<T, UnitUniformLaw> || std::is_same_v<T, ShiftedUniformLaw>) {
          return mean_from_survival(survival, 1.0, 0.0);
        } else if constexpr (std::is_same_v<T, ExpBetaMixtureLaw>) {
          // The survival function is at most e^{-x}/(c+1) since y <= 1.
          return mean_from_survival(survival, x_max, std::exp(-x_max) / (p.c + 1.0));
        } else if constexpr (std::is_same_v<T, ExpBetaMixtureConditionalLaw>) {
          return mean_from_survival(survival, x_max, std::exp(-x_max));
        } else if constexpr (std::is_same_v<T, PointMassLaw>) {
          return {p.at, 0.0};
        } else {
          throw std::domain_error("mean: no analytic tail bound for " + describe());
        }
      },
      params_);
}

}  // namespace branchregen
