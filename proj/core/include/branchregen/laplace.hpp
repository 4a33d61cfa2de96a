#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace branchregen {

/// A Laplace transform s -> E e^{-s Z} continued to Re s > 0.
using ComplexTransform = std::function<std::complex<double>(std::complex<double>)>;

struct EulerInversionSpec {
  /// Number of Euler terms beyond the first; must be even, 2M with M the
  /// precision parameter (error roughly 10^{-0.6 M} for smooth targets).
  int terms = 40;
  /// Also invert with terms - 8 and flag grid points where the two disagree
  /// by more than `divergence_tolerance`.
  bool check_divergence = true;
  double divergence_tolerance = 1e-4;
};

enum class InversionTarget { cdf, survival };

struct InversionResult {
  std::vector<double> x;
  std::vector<double> values;  // clipped to [0, 1] and monotonized
  std::vector<double> raw;     // straight Euler output
  /// Grid points where the two-precision comparison disagreed or the raw
  /// value was not finite.
  std::vector<std::size_t> divergent;
  double max_clip = 0.0;  // largest distance moved by clipping and monotonizing
  std::string diagnostic;

  bool diverged() const noexcept { return !divergent.empty(); }
};

/// Abate-Whitt unified Euler inversion of an arbitrary transform F at t > 0.
double euler_invert(const ComplexTransform& transform, double t, int terms = 40);

/// CDF (or survival function) values on an increasing positive grid of the
/// law whose transform is `transform`. Inverts phi(s)/s, or
/// (phi(0) - phi(s))/s for the survival target, so defective transforms
/// with phi(0) < 1 produce the sub-probability CDF they describe.
InversionResult invert_laplace_cdf(const ComplexTransform& transform, std::span<const double> grid,
                                   const EulerInversionSpec& spec = {},
                                   InversionTarget target = InversionTarget::cdf);

}  // namespace branchregen
