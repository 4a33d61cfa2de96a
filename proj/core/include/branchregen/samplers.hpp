#pragma once

#include <cstdint>
#include <span>

#include "branchregen/laws.hpp"
#include "branchregen/rng.hpp"

namespace branchregen {

/// One offspring count X.
std::int64_t sample_offspring(const OffspringLaw& law, RngStream& rng);

/// Sum of `families` independent offspring counts, drawn in O(1) or
/// O(support) time from the exact law of the sum (binomial, negative
/// binomial, Poisson or multinomial). Equal in law to summing
/// sample_offspring `families` times.
std::int64_t sample_offspring_sum(const OffspringLaw& law, std::int64_t families,
                                  RngStream& rng);

std::int64_t sample_integer(const IntegerLaw& law, RngStream& rng);

/// Draw from the law conditioned on being positive. Throws LawError if
/// P(X > 0) = 0.
std::int64_t sample_integer_positive(const IntegerLaw& law, RngStream& rng);

/// The migration component M^+ applied when the population is positive.
///
/// With probability p returns -(X_1 + ... + X_famE) - indE, where X_i are
/// taken from `offspring_draws` (the current generation's first families)
/// and fresh offspring draws stand in for indices past its end; with
/// probability q returns 0; with probability r returns a draw of I^+.
std::int64_t sample_migration_plus(const MigrationParams& params, const OffspringLaw& offspring,
                                   std::span<const std::int64_t> offspring_draws,
                                   RngStream& rng);

/// The migration component M^o applied at zero: I^o with probability r, else 0.
std::int64_t sample_migration_zero(const MigrationParams& params, RngStream& rng);

std::int64_t sample_down_period(const DownPeriodLaw& law, RngStream& rng);

/// ceil(u^{-1/exponent}) clamped to kHeavyTailClamp; u in (0, 1].
std::int64_t heavy_tail_from_uniform(double u, double exponent);

/// ceil(U^{-1/exponent}) with U uniform on (0, 1]. Rejects exponents
/// outside (1/2, 1].
std::int64_t sample_heavy_tail_integer(double exponent, RngStream& rng);

}  // namespace branchregen
