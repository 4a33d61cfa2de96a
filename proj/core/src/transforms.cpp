#include "branchregen/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "branchregen/quadrature.hpp"
#include "branchregen/special.hpp"

namespace branchregen {
namespace {

using cplx = std::complex<double>;

void require_rho_regime(double theta, double rho) {
  if (!(rho > 0.5 && rho < 1.0)) throw std::invalid_argument("rho must lie in (1/2, 1)");
  if (!(theta + rho < 1.0)) throw std::invalid_argument("theta + rho must be below 1");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (1/2, 1]");
}

QuadratureSpec inner_spec() {
  QuadratureSpec spec;
  spec.abs_tolerance = 1e-15;
  spec.rel_tolerance = 1e-14;
  spec.max_level = 12;
  return spec;
}

QuadratureSpec outer_spec() {
  QuadratureSpec spec;
  spec.abs_tolerance = 1e-13;
  spec.rel_tolerance = 1e-13;
  spec.max_level = 10;
  return spec;
}

// J(w) = int_0^1 (1-y)^{-rho} (1 + w y)^{-(theta+1)} dy.
template <typename T>
T phi_integral(T w, double theta, double rho) {
  auto spec = inner_spec();
  spec.right_exponent = -rho;
  return quad_singular_result(
             [&](double y, double rest) {
               return std::pow(rest, -rho) * std::pow(T(1.0) + w * y, -(theta + 1.0));
             },
             spec)
      .value;
}

template <typename T>
T phi_impl(T s, double theta, double rho) {
  const T first = std::pow(s, rho) * (1.0 - theta - rho) * beta_function(1.0 - rho, 1.0 - theta) /
                  std::pow(T(1.0) + s, theta + rho);
  T second{};
  if (theta != 0.0) second = s * theta * phi_integral(s, theta, rho);
  return T(1.0) - first - second;
}

// int_0^1 u^{1-rho} (1-u)^{a-1} J(lambda u) du
template <typename T>
T double_integral(T s, double theta, double rho, double a) {
  auto spec = outer_spec();
  spec.right_exponent = a - 1.0;
  return quad_singular_result(
             [&](double u, double rest) {
               return std::pow(u, 1.0 - rho) * std::pow(rest, a - 1.0) *
                      phi_integral(s * u, theta, rho);
             },
             spec)
      .value;
}

// s^rho (1+s)^{-theta-rho} int_0^1 v^{a-1} (1 - z v)^{-theta-rho} dv with z = s/(1+s);
// equals B_z(a, 1-theta-rho) (1+s)^{-theta} (s/(1+s))^{rho-a} for real s.
cplx scaled_incomplete(cplx s, double theta, double rho, double a) {
  auto spec = inner_spec();
  spec.left_exponent = a - 1.0;
  const cplx one_plus_s = 1.0 + s;
  const cplx integral =
      quad_singular_result(
          [&](double v, double rest) {
            // 1 - z v = (1 + s (1 - v)) / (1 + s)
            const cplx base = (1.0 + s * rest) / one_plus_s;
            return std::pow(v, a - 1.0) * std::pow(base, -(theta + rho));
          },
          spec)
          .value;
  return std::pow(s, rho) * std::pow(one_plus_s, -(theta + rho)) * integral;
}

double lt2_correction(double alpha, double theta, double rho) {
  return (alpha + 1.0 - theta - rho) * beta_function(1.0 - theta, alpha + 1.0 - rho);
}

}  // namespace

double phi_laplace(double lambda, double theta, double rho) {
  require_rho_regime(theta, rho);
  if (!(lambda >= 0.0)) throw std::invalid_argument("phi_laplace: lambda must be nonnegative");
  if (lambda == 0.0) return 1.0;
  return phi_impl(lambda, theta, rho);
}

cplx phi_laplace(cplx s, double theta, double rho) {
  require_rho_regime(theta, rho);
  if (s == 0.0) return 1.0;
  return phi_impl(s, theta, rho);
}

double lt1(double lambda, double theta, double rho, TailRatio c) {
  const double cv = c.value();
  require_rho_regime(theta, rho);
  if (!(lambda >= 0.0)) throw std::invalid_argument("lt1: lambda must be nonnegative");
  if (lambda == 0.0) return 1.0 / (cv + 1.0);
  const double x = lambda / (lambda + 1.0);
  double value = 1.0 - incomplete_beta_ratio(x, rho, 1.0 - theta - rho) / std::pow(lambda + 1.0, theta);
  if (theta != 0.0) {
    value -= lambda * theta / beta_function(1.0 - rho, rho) * double_integral(lambda, theta, rho, rho);
  }
  return value / (cv + 1.0);
}

cplx lt1(cplx s, double theta, double rho, TailRatio c) {
  const double cv = c.value();
  require_rho_regime(theta, rho);
  if (s == 0.0) return 1.0 / (cv + 1.0);
  cplx value = 1.0 - scaled_incomplete(s, theta, rho, rho) / beta_function(rho, 1.0 - theta - rho);
  if (theta != 0.0) {
    value -= s * theta / beta_function(1.0 - rho, rho) * double_integral(s, theta, rho, rho);
  }
  return value / (cv + 1.0);
}

double lt2(double lambda, double theta, double rho, double alpha) {
  require_rho_regime(theta, rho);
  require_alpha(alpha);
  if (!(lambda >= 0.0)) throw std::invalid_argument("lt2: lambda must be nonnegative");
  if (lambda == 0.0) return 1.0;
  const double x = lambda / (lambda + 1.0);
  const double inv_c =
      std::pow(x, rho - alpha) * std::pow(lambda + 1.0, -theta) * lt2_correction(alpha, theta, rho);
  double value = 1.0 - incomplete_beta_ratio(x, alpha, 1.0 - theta - rho) * inv_c;
  if (theta != 0.0) {
    value -= lambda * theta / beta_function(1.0 - rho, alpha) * double_integral(lambda, theta, rho, alpha);
  }
  return value;
}

cplx lt2(cplx s, double theta, double rho, double alpha) {
  require_rho_regime(theta, rho);
  require_alpha(alpha);
  if (s == 0.0) return 1.0;
  cplx value = 1.0 - scaled_incomplete(s, theta, rho, alpha) * lt2_correction(alpha, theta, rho) /
                         beta_function(alpha, 1.0 - theta - rho);
  if (theta != 0.0) {
    value -= s * theta / beta_function(1.0 - rho, alpha) * double_integral(s, theta, rho, alpha);
  }
  return value;
}

double lt2_numerator_constant(double lambda, double theta, double rho, double alpha) {
  require_rho_regime(theta, rho);
  require_alpha(alpha);
  if (lambda == 0.0) return 1.0;
  const double big_c = std::pow(lambda, alpha - rho) * (alpha + 1.0 - theta - rho) /
                       (std::pow(lambda + 1.0, alpha - theta - rho) *
                        beta_function(1.0 - theta, alpha + 1.0 - rho));
  double value = 1.0 - incomplete_beta_ratio(lambda / (lambda + 1.0), alpha, 1.0 - theta - rho) / big_c;
  if (theta != 0.0) {
    value -= lambda * theta / beta_function(1.0 - rho, alpha) * double_integral(lambda, theta, rho, alpha);
  }
  return value;
}

double lt1_mixture(double lambda, double theta, double rho, TailRatio c) {
  const double cv = c.value();
  require_rho_regime(theta, rho);
  auto spec = outer_spec();
  spec.left_exponent = -rho;
  spec.right_exponent = rho - 1.0;
  const double integral = quad_singular_result(
                              [&](double u, double rest) {
                                return std::pow(u, -rho) * std::pow(rest, rho - 1.0) *
                                       phi_laplace(lambda * u, theta, rho);
                              },
                              spec)
                              .value;
  return integral / ((cv + 1.0) * beta_function(1.0 - rho, rho));
}

double lt2_mixture(double lambda, double theta, double rho, double alpha) {
  require_rho_regime(theta, rho);
  require_alpha(alpha);
  auto spec = outer_spec();
  spec.left_exponent = -rho;
  spec.right_exponent = alpha - 1.0;
  const double integral = quad_singular_result(
                              [&](double u, double rest) {
                                return std::pow(u, -rho) * std::pow(rest, alpha - 1.0) *
                                       phi_laplace(lambda * u, theta, rho);
                              },
                              spec)
                              .value;
  return integral / beta_function(1.0 - rho, alpha);
}

LimitLaw cycle_rho_limit_law(double theta, double rho, const EulerInversionSpec& spec) {
  require_rho_regime(theta, rho);
  return LimitLaw::transform_defined(
      "phi(theta=" + std::to_string(theta) + ", rho=" + std::to_string(rho) + ")",
      [theta, rho](cplx s) { return phi_laplace(s, theta, rho); }, 0.0, 1e-6, 1e4, 241, spec);
}

LimitLaw rho_limit_law(double theta, double rho, TailRatio c, const EulerInversionSpec& spec) {
  const double cv = c.value();
  require_rho_regime(theta, rho);
  return LimitLaw::transform_defined(
      "lt1(theta=" + std::to_string(theta) + ", rho=" + std::to_string(rho) +
          ", c=" + c.describe() + ")",
      [theta, rho, c](cplx s) { return lt1(s, theta, rho, c); }, cv / (cv + 1.0), 1e-4, 1e4, 61,
      spec);
}

LimitLaw rho_limit_law_conditional(double theta, double rho, double alpha,
                                   const EulerInversionSpec& spec) {
  require_rho_regime(theta, rho);
  require_alpha(alpha);
  return LimitLaw::transform_defined(
      "lt2(theta=" + std::to_string(theta) + ", rho=" + std::to_string(rho) +
          ", alpha=" + std::to_string(alpha) + ")",
      [theta, rho, alpha](cplx s) { return lt2(s, theta, rho, alpha); }, 0.0, 1e-4, 1e4, 61, spec);
}

}  // namespace branchregen
