#include "branchregen/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace branchregen {
namespace {

struct EulerWeights {
  int m = 0;
  double base = 0.0;  // M ln 10 / 3
  std::vector<double> eta;
};

EulerWeights euler_weights(int terms) {
  if (terms < 2 || terms % 2 != 0) {
    throw std::invalid_argument("Euler inversion: terms must be a positive even number");
  }
  EulerWeights w;
  w.m = terms / 2;
  const int m = w.m;
  w.base = m * std::numbers::ln10 / 3.0;
  std::vector<double> xi(static_cast<std::size_t>(2 * m + 1), 1.0);
  xi[0] = 0.5;
  const double scale = std::ldexp(1.0, -m);
  xi[static_cast<std::size_t>(2 * m)] = scale;
  double binom = 1.0;  // C(M, k)
  for (int k = 1; k < m; ++k) {
    binom = binom * (m - k + 1) / k;
    xi[static_cast<std::size_t>(2 * m - k)] = xi[static_cast<std::size_t>(2 * m - k + 1)] + scale * binom;
  }
  w.eta.resize(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) w.eta[k] = (k % 2 == 0 ? 1.0 : -1.0) * xi[k];
  return w;
}

double euler_sum(const ComplexTransform& transform, double t, const EulerWeights& w) {
  double sum = 0.0;
  for (std::size_t k = 0; k < w.eta.size(); ++k) {
    const std::complex<double> beta(w.base, std::numbers::pi * static_cast<double>(k));
    sum += w.eta[k] * transform(beta / t).real();
  }
  return std::pow(10.0, w.m / 3.0) / t * sum;
}

}  // namespace

double euler_invert(const ComplexTransform& transform, double t, int terms) {
  if (!(t > 0.0)) throw std::invalid_argument("Euler inversion: t must be positive");
  return euler_sum(transform, t, euler_weights(terms));
}

InversionResult invert_laplace_cdf(const ComplexTransform& transform, std::span<const double> grid,
                                   const EulerInversionSpec& spec, InversionTarget target) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw std::invalid_argument("Laplace inversion: grid must be positive and strictly increasing");
    }
  }
  const auto primary = euler_weights(spec.terms);
  const auto secondary = euler_weights(std::max(2, spec.terms - 8));

  ComplexTransform integrand;
  if (target == InversionTarget::cdf) {
    integrand = [&](std::complex<double> s) { return transform(s) / s; };
  } else {
    const double mass = transform(std::complex<double>(0.0, 0.0)).real();
    integrand = [&, mass](std::complex<double> s) { return (mass - transform(s)) / s; };
  }

  InversionResult out;
  out.x.assign(grid.begin(), grid.end());
  out.raw.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = euler_sum(integrand, grid[i], primary);
    out.raw.push_back(v);
    if (!std::isfinite(v)) {
      out.divergent.push_back(i);
      continue;
    }
    if (spec.check_divergence) {
      const double check = euler_sum(integrand, grid[i], secondary);
      if (!(std::abs(check - v) <= spec.divergence_tolerance)) out.divergent.push_back(i);
    }
  }

  out.values.resize(grid.size());
  double running = target == InversionTarget::cdf ? 0.0 : 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = std::isfinite(out.raw[i]) ? std::clamp(out.raw[i], 0.0, 1.0) : running;
    v = target == InversionTarget::cdf ? std::max(v, running) : std::min(v, running);
    running = v;
    out.values[i] = v;
    if (std::isfinite(out.raw[i])) out.max_clip = std::max(out.max_clip, std::abs(v - out.raw[i]));
  }

  if (out.diverged()) {
    std::ostringstream msg;
    msg << out.divergent.size() << " of " << grid.size()
        << " grid points failed the two-precision agreement check (first at x = "
        << grid[out.divergent.front()] << ")";
    out.diagnostic = msg.str();
  }
  return out;
}

}  // namespace branchregen
