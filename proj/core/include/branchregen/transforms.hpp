#pragma once

#include <complex>

#include "branchregen/laplace.hpp"
#include "branchregen/limits.hpp"

namespace branchregen {

/// phi(lambda) = 1 - lambda^rho (1-theta-rho) B(1-rho, 1-theta) / (1+lambda)^{theta+rho}
///               - lambda theta int_0^1 (1-y)^{-rho} (1+lambda y)^{-(theta+1)} dy,
/// the transform of the conditional cycle limit under heavy-tailed
/// immigration at zero. Requires 1/2 < rho < 1 and theta + rho < 1.
double phi_laplace(double lambda, double theta, double rho);
std::complex<double> phi_laplace(std::complex<double> s, double theta, double rho);

/// The transform as printed for a finite tail ratio c:
/// (1/(c+1)) (1 - I_{l/(l+1)}(rho, 1-theta-rho) / (l+1)^theta
///            - (l theta / B(1-rho, rho)) int int u^{1-rho} (1+l y u)^{-theta-1}
///              (1-u)^{rho-1} (1-y)^{-rho} dy du).
/// Its value at 0 is 1/(c+1): it carries only the non-atomic part, and the
/// full transform is c/(c+1) + lt1.
double lt1(double lambda, double theta, double rho, TailRatio c);
std::complex<double> lt1(std::complex<double> s, double theta, double rho, TailRatio c);

/// Transform for c = infinity:
/// 1 - I_{l/(l+1)}(alpha, 1-theta-rho) / C - (l theta / B(1-rho, alpha)) int int
///   u^{1-rho} (1+l y u)^{-theta-1} (1-u)^{alpha-1} (1-y)^{-rho} dy du
/// with C = l^{alpha-rho} / ((l+1)^{alpha-theta-rho} (alpha+1-theta-rho) B(1-theta, alpha+1-rho)).
double lt2(double lambda, double theta, double rho, double alpha);
std::complex<double> lt2(std::complex<double> s, double theta, double rho, double alpha);

/// lt2 with the constant written as
/// C = l^{alpha-rho} (alpha+1-theta-rho) / ((l+1)^{alpha-theta-rho} B(1-theta, alpha+1-rho)).
/// Kept to document that this placement of (alpha+1-theta-rho) does not
/// satisfy the mixture identity; see lt2.
double lt2_numerator_constant(double lambda, double theta, double rho, double alpha);

/// (1 / ((c+1) B(1-rho, rho))) int_0^1 u^{-rho} (1-u)^{rho-1} phi(lambda u) du.
double lt1_mixture(double lambda, double theta, double rho, TailRatio c);

/// (1 / B(1-rho, alpha)) int_0^1 u^{-rho} (1-u)^{alpha-1} phi(lambda u) du.
double lt2_mixture(double lambda, double theta, double rho, double alpha);

/// Conditional cycle limit law, by inverting phi.
LimitLaw cycle_rho_limit_law(double theta, double rho, const EulerInversionSpec& spec = {});

/// Regenerative limit for finite c: atom c/(c+1) at zero plus the inverted lt1.
LimitLaw rho_limit_law(double theta, double rho, TailRatio c, const EulerInversionSpec& spec = {});

/// Regenerative limit for c = infinity, by inverting lt2.
LimitLaw rho_limit_law_conditional(double theta, double rho, double alpha,
                                   const EulerInversionSpec& spec = {});

}  // namespace branchregen
