#include "branchregen/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/random/binomial_distribution.hpp>

namespace branchregen {
namespace {

std::int64_t sample_from_pmf(const std::vector<double>& pmf, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    acc += pmf[k];
    if (u < acc) return static_cast<std::int64_t>(k);
  }
  // u landed in the rounding gap above the last partial sum.
  auto k = pmf.size() - 1;
  while (k > 0 && pmf[k] == 0.0) --k;
  return static_cast<std::int64_t>(k);
}

std::int64_t binomial(std::int64_t n, double p, RngStream& rng) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  // libstdc++'s binomial_distribution is biased upward for n p above ~8
  // with small p (about 0.2% at n p = 10); Boost's BTRD sampler is exact.
  return boost::random::binomial_distribution<std::int64_t, double>(n, p)(rng);
}

std::int64_t poisson(double mean, RngStream& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

// Multinomial split of n draws over a finite pmf; returns the sum of values.
std::int64_t tabulated_sum(const std::vector<double>& pmf, std::int64_t n, RngStream& rng) {
  std::int64_t remaining = n;
  double mass_left = 1.0;
  std::int64_t total = 0;
  for (std::size_t k = 0; k + 1 < pmf.size() && remaining > 0; ++k) {
    if (pmf[k] == 0.0) continue;
    const double p = mass_left > 0.0 ? std::clamp(pmf[k] / mass_left, 0.0, 1.0) : 1.0;
    const std::int64_t count = binomial(remaining, p, rng);
    total += count * static_cast<std::int64_t>(k);
    remaining -= count;
    mass_left -= pmf[k];
  }
  if (remaining > 0) {
    auto last = pmf.size() - 1;
    while (last > 0 && pmf[last] == 0.0) --last;
    total += remaining * static_cast<std::int64_t>(last);
  }
  return total;
}

std::int64_t positive_poisson(double mean, RngStream& rng) {
  if (mean > 8.0) {
    for (;;) {
      const auto k = poisson(mean, rng);
      if (k > 0) return k;
    }
  }
  // Inversion of P(X = k | X > 0) = e^{-m} m^k / (k! (1 - e^{-m})).
  const double u = rng.uniform();
  double term = std::exp(-mean) * mean / -std::expm1(-mean);
  double acc = term;
  std::int64_t k = 1;
  while (u >= acc && k < 10000) {
    ++k;
    term *= mean / static_cast<double>(k);
    acc += term;
  }
  return k;
}

}  // namespace

std::int64_t sample_offspring(const OffspringLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case OffspringKind::binary: return rng.bernoulli(0.5) ? 2 : 0;
    case OffspringKind::shifted_geometric:
      return std::geometric_distribution<std::int64_t>(0.5)(rng);
    case OffspringKind::unit_poisson: return poisson(1.0, rng);
    case OffspringKind::tabulated: return sample_from_pmf(law.pmf(), rng.uniform());
  }
  return 0;
}

std::int64_t sample_offspring_sum(const OffspringLaw& law, std::int64_t families,
                                  RngStream& rng) {
  if (families <= 0) return 0;
  switch (law.kind()) {
    case OffspringKind::binary: return 2 * binomial(families, 0.5, rng);
    case OffspringKind::shifted_geometric:
      // Sum of n Geometric(1/2) failure counts is NegativeBinomial(n, 1/2),
      // drawn as a Gamma(n, 1)-mixed Poisson.
      return poisson(std::gamma_distribution<double>(static_cast<double>(families), 1.0)(rng),
                     rng);
    case OffspringKind::unit_poisson: return poisson(static_cast<double>(families), rng);
    case OffspringKind::tabulated: return tabulated_sum(law.pmf(), families, rng);
  }
  return 0;
}

std::int64_t sample_integer(const IntegerLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case IntegerLawKind::constant: return law.value();
    case IntegerLawKind::poisson: return poisson(law.rate(), rng);
    case IntegerLawKind::tabulated: return sample_from_pmf(law.pmf(), rng.uniform());
    case IntegerLawKind::heavy_tail:
      return heavy_tail_from_uniform(rng.uniform_open0() / law.scale(), law.exponent());
  }
  return 0;
}

std::int64_t sample_integer_positive(const IntegerLaw& law, RngStream& rng) {
  if (!(law.prob_positive() > 0.0)) {
    throw LawError("cannot condition " + law.describe() + " on being positive");
  }
  switch (law.kind()) {
    case IntegerLawKind::constant: return law.value();
    case IntegerLawKind::poisson: return positive_poisson(law.rate(), rng);
    case IntegerLawKind::tabulated: {
      const auto& pmf = law.pmf();
      const double u = pmf[0] + rng.uniform() * (1.0 - pmf[0]);
      return std::max<std::int64_t>(1, sample_from_pmf(pmf, u));
    }
    case IntegerLawKind::heavy_tail:
      return heavy_tail_from_uniform(rng.uniform_open0() / law.scale(), law.exponent());
  }
  return 0;
}

std::int64_t sample_migration_plus(const MigrationParams& params, const OffspringLaw& offspring,
                                   std::span<const std::int64_t> offspring_draws,
                                   RngStream& rng) {
  const double u = rng.uniform();
  if (u < params.p) {
    const std::int64_t families = sample_integer(params.fam_emigration, rng);
    std::int64_t removed = 0;
    for (std::int64_t i = 0; i < families; ++i) {
      removed += static_cast<std::size_t>(i) < offspring_draws.size()
                     ? offspring_draws[static_cast<std::size_t>(i)]
                     : sample_offspring(offspring, rng);
    }
    removed += sample_integer(params.ind_emigration, rng);
    return -removed;
  }
  if (u < params.p + params.q) return 0;
  return sample_integer(params.immigration_plus, rng);
}

std::int64_t sample_migration_zero(const MigrationParams& params, RngStream& rng) {
  if (!rng.bernoulli(params.r)) return 0;
  return sample_integer(params.immigration_zero, rng);
}

std::int64_t sample_down_period(const DownPeriodLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case DownPeriodKind::geometric:
      if (law.success_probability() >= 1.0) return 1;
      return 1 + std::geometric_distribution<std::int64_t>(law.success_probability())(rng);
    case DownPeriodKind::heavy_tail:
      return heavy_tail_from_uniform(rng.uniform_open0() / law.scale(), law.alpha());
    case DownPeriodKind::deterministic: return law.duration();
  }
  return 1;
}

std::int64_t heavy_tail_from_uniform(double u, double exponent) {
  const double x = std::ceil(std::pow(u, -1.0 / exponent));
  if (!(x < static_cast<double>(kHeavyTailClamp))) return kHeavyTailClamp;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(x));
}

std::int64_t sample_heavy_tail_integer(double exponent, RngStream& rng) {
  if (!(exponent > 0.5 && exponent <= 1.0)) {
    throw LawError("heavy-tail exponent must lie in (1/2, 1]");
  }
  return heavy_tail_from_uniform(rng.uniform_open0(), exponent);
}

}  // namespace branchregen
