#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace branchregen {

/// Tolerance and refinement limits for quad_singular.
struct QuadratureSpec {
  double abs_tolerance = 1e-10;
  double rel_tolerance = 0.0;
  int max_level = 10;
  /// Declared endpoint exponents a-1, b-1 of the integrand's
  /// u^{a-1} (1-u)^{b-1} behaviour, checked for integrability (> -1).
  /// Nodes stop at kQuadratureEndpointGap from either end, and the two
  /// skipped end pieces are added as C gap^a / a with C fitted to the
  /// outermost node, so the exponents matter for strong singularities.
  double left_exponent = 0.0;
  double right_exponent = 0.0;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  int levels = 0;
  bool converged = false;
};

/// Raised when refinement stops before reaching the tolerance; carries the
/// best estimate and its error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }

}  // namespace detail

/// Closest approach of a quadrature node to either endpoint. Keeps u^{a-1}
/// finite for every integrable power a - 1 > -1.
inline constexpr double kQuadratureEndpointGap = 1e-300;

/// Tanh-sinh (double-exponential) quadrature on [0, 1].
///
/// The integrand is called as f(u, 1 - u) with both coordinates computed
/// without cancellation, so factors like (1-u)^{-rho} stay accurate when u
/// is within 1e-300 of an endpoint. Nodes whose coordinate underflows to
/// zero are skipped. Works for real or std::complex<double> integrands.
template <typename F>
auto quad_singular_result(F&& f, const QuadratureSpec& spec = {}) {
  using T = std::decay_t<decltype(f(0.5, 0.5))>;
  if (!(spec.abs_tolerance > 0.0) && !(spec.rel_tolerance > 0.0)) {
    throw std::invalid_argument("quadrature: tolerance must be positive");
  }
  if (spec.left_exponent <= -1.0 || spec.right_exponent <= -1.0) {
    throw std::invalid_argument("quadrature: declared endpoint singularity is not integrable");
  }
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  // Largest abscissa whose nodes keep the endpoint gap.
  const double t_max = std::asinh(-std::log(kQuadratureEndpointGap) / (2.0 * kHalfPi));
  auto distance = [&](double t) {
    const double e = std::exp(-2.0 * kHalfPi * std::sinh(t));  // e^{-pi sinh t}
    return e / (1.0 + e);
  };

  // Contribution of the symmetric node pair at abscissa t >= 0.
  auto pair_sum = [&](double t) -> T {
    const double e = std::exp(-2.0 * kHalfPi * std::sinh(t));
    const double small = e / (1.0 + e);  // distance to nearer endpoint
    const double weight = 2.0 * kHalfPi * std::cosh(t) * e / ((1.0 + e) * (1.0 + e));
    const double large = 1.0 / (1.0 + e);
    if (t == 0.0) return weight * f(0.5, 0.5);
    return weight * (f(small, large) + f(large, small));
  };

  // The trapezoid sum with step h covers t up to about t_last + h/2. Below
  // that distance the integrand is taken as C u^p at each end.
  auto end_pieces = [&](double h) -> T {
    const double t_last = std::floor(t_max / h) * h;
    const double u_last = distance(t_last);
    const double u_edge = distance(t_last + h / 2.0);
    const double large = 1.0 - u_last;
    auto piece = [&](const T& value, double p) -> T {
      return value * (std::pow(u_edge / u_last, p) * u_edge / (p + 1.0));
    };
    return piece(f(u_last, large), spec.left_exponent) + piece(f(large, u_last), spec.right_exponent);
  };

  QuadratureResult<T> result;
  double h = 1.0;
  T sum = pair_sum(0.0);
  for (double t = h; t <= t_max; t += h) sum += pair_sum(t);
  T estimate = h * sum + end_pieces(h);
  double error = std::numeric_limits<double>::infinity();

  for (int level = 1; level <= spec.max_level; ++level) {
    h /= 2.0;
    T fresh{};
    for (double t = h; t <= t_max; t += 2.0 * h) fresh += pair_sum(t);
    sum += fresh;
    const T next = h * sum + end_pieces(h);
    error = detail::magnitude(next - estimate);
    estimate = next;
    result.levels = level;
    const double target =
        std::max(spec.abs_tolerance, spec.rel_tolerance * detail::magnitude(estimate));
    if (level >= 3 && error <= target) {
      result.converged = true;
      break;
    }
  }
  result.value = estimate;
  result.error_estimate = error;
  return result;
}

/// quad_singular_result that throws QuadratureError on non-convergence.
template <typename F>
auto quad_singular(F&& f, const QuadratureSpec& spec = {}) {
  auto result = quad_singular_result(std::forward<F>(f), spec);
  if (!result.converged) {
    throw QuadratureError("quadrature did not converge within " +
                              std::to_string(spec.max_level) + " refinement levels",
                          detail::real_part(result.value), result.error_estimate);
  }
  return result.value;
}

/// Integral of f(x) over [a, b] via the affine map onto [0, 1].
template <typename F>
auto quad_interval(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  const double width = b - a;
  return width * quad_singular(
                     [&](double u, double v) { return f(u < 0.5 ? a + width * u : b - width * v); },
                     spec);
}

}  // namespace branchregen
