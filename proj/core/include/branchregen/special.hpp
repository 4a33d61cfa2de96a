#pragma once

#include <complex>

namespace branchregen {

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b); rejects a <= 0 or b <= 0.
double beta_function(double a, double b);

/// Regularized incomplete Beta I_x(a, b) = B_x(a, b) / B(a, b) on x in [0, 1].
double incomplete_beta_ratio(double x, double a, double b);

/// Regularized lower incomplete Gamma P(theta, x).
double gamma_cdf(double x, double theta);

/// Unregularized B_z(a, b) = z^a * int_0^1 s^{a-1} (1 - z s)^{b-1} ds for
/// complex z off the ray [1, inf), by quadrature. `one_minus_z` must equal
/// 1 - z; passing it separately keeps 1 - z s accurate when z is close to 1.
std::complex<double> incomplete_beta_complex(std::complex<double> z,
                                             std::complex<double> one_minus_z, double a,
                                             double b);

}  // namespace branchregen
