#include "branchregen/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "branchregen/quadrature.hpp"

namespace branchregen {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete_beta_ratio: continued fraction did not converge");
}

double lower_gamma_series(double x, double a) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_cdf: series did not converge");
}

double upper_gamma_fraction(double x, double a) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("gamma_cdf: continued fraction did not converge");
}

}  // namespace

double beta_function(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("beta_function: arguments must be positive, got a=" +
                                std::to_string(a) + ", b=" + std::to_string(b));
  }
  if (a + b < 150.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::exp(log_beta(a, b));
}

double incomplete_beta_ratio(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete_beta_ratio: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incomplete_beta_ratio: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double gamma_cdf(double x, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("gamma_cdf: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < theta + 1.0) return lower_gamma_series(x, theta);
  return 1.0 - upper_gamma_fraction(x, theta);
}

std::complex<double> incomplete_beta_complex(std::complex<double> z,
                                             std::complex<double> one_minus_z, double a,
                                             double b) {
  if (!(a > 0.0)) throw std::invalid_argument("incomplete_beta_complex: a must be positive");
  if (z == 0.0) return 0.0;
  QuadratureSpec spec;
  spec.abs_tolerance = 1e-15;
  spec.rel_tolerance = 1e-14;
  spec.max_level = 12;
  spec.left_exponent = std::min(a - 1.0, 0.0);
  const auto integral = quad_singular_result(
      [&](double s, double rest) {
        // 1 - z s, written as (1 - z) + z (1 - s) near s = 1.
        const std::complex<double> base = s < 0.5 ? 1.0 - z * s : one_minus_z + z * rest;
        return std::pow(s, a - 1.0) * std::pow(base, b - 1.0);
      },
      spec);
  return std::pow(z, a) * integral.value;
}

}  // namespace branchregen
