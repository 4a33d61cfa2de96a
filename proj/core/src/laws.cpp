#include "branchregen/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace branchregen {
namespace {

constexpr double kPmfTolerance = 1e-12;
constexpr double kProbabilitySumTolerance = 1e-9;

void check_pmf(const std::vector<double>& pmf, const char* what) {
  if (pmf.empty()) {
    throw LawError(std::string(what) + ": pmf must be nonempty");
  }
  for (double v : pmf) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw LawError(std::string(what) + ": pmf entries must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  if (std::abs(total - 1.0) > kPmfTolerance) {
    std::ostringstream msg;
    msg << what << ": pmf sums to " << total << ", expected 1";
    throw LawError(msg.str());
  }
}

double pmf_moment(const std::vector<double>& pmf, int order) {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    m += pmf[k] * std::pow(static_cast<double>(k), order);
  }
  return m;
}

std::string pmf_string(const std::vector<double>& pmf) {
  std::ostringstream out;
  out << '[';
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    out << (k ? ", " : "") << pmf[k];
  }
  out << ']';
  return out.str();
}

}  // namespace

OffspringLaw OffspringLaw::binary() { return {OffspringKind::binary, 1.0, {}}; }

OffspringLaw OffspringLaw::shifted_geometric() {
  return {OffspringKind::shifted_geometric, 2.0, {}};
}

OffspringLaw OffspringLaw::unit_poisson() { return {OffspringKind::unit_poisson, 1.0, {}}; }

OffspringLaw OffspringLaw::tabulated(std::vector<double> pmf) {
  check_pmf(pmf, "offspring law");
  const double mean = pmf_moment(pmf, 1);
  if (std::abs(mean - 1.0) > kPmfTolerance) {
    std::ostringstream msg;
    msg << "offspring law: mean is " << mean << ", a critical law needs mean 1";
    throw LawError(msg.str());
  }
  const double variance = pmf_moment(pmf, 2) - mean * mean;
  if (!(variance > kPmfTolerance)) {
    throw LawError("offspring law: variance must be positive");
  }
  return {OffspringKind::tabulated, variance, std::move(pmf)};
}

OffspringLaw OffspringLaw::degenerate_unit() { return {OffspringKind::tabulated, 0.0, {0.0, 1.0}}; }

bool OffspringLaw::has_finite_moment(double /*order*/) const noexcept { return true; }

std::string OffspringLaw::describe() const {
  switch (kind_) {
    case OffspringKind::binary: return "binary";
    case OffspringKind::shifted_geometric: return "shifted-geometric";
    case OffspringKind::unit_poisson: return "unit-poisson";
    case OffspringKind::tabulated: return "tabulated" + pmf_string(pmf_);
  }
  return "?";
}

IntegerLaw IntegerLaw::constant(std::int64_t value) {
  if (value < 0) throw LawError("integer law: constant must be nonnegative");
  return {IntegerLawKind::constant, value, 0.0, {}};
}

IntegerLaw IntegerLaw::poisson(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw LawError("integer law: Poisson mean must be positive and finite");
  }
  return {IntegerLawKind::poisson, 0, mean, {}};
}

IntegerLaw IntegerLaw::tabulated(std::vector<double> pmf) {
  check_pmf(pmf, "integer law");
  return {IntegerLawKind::tabulated, 0, 0.0, std::move(pmf)};
}

IntegerLaw IntegerLaw::heavy_tail(double exponent, double scale) {
  if (!(exponent > 0.5 && exponent <= 1.0)) {
    throw LawError("integer law: heavy-tail exponent must lie in (1/2, 1]");
  }
  if (!(scale > 0.0 && std::isfinite(scale))) {
    throw LawError("integer law: heavy-tail scale must be finite and positive");
  }
  return {IntegerLawKind::heavy_tail, 0, exponent, {}, scale};
}

double IntegerLaw::mean() const noexcept {
  switch (kind_) {
    case IntegerLawKind::constant: return static_cast<double>(value_);
    case IntegerLawKind::poisson: return rate_;
    case IntegerLawKind::tabulated: return pmf_moment(pmf_, 1);
    case IntegerLawKind::heavy_tail: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double IntegerLaw::prob_positive() const noexcept {
  switch (kind_) {
    case IntegerLawKind::constant: return value_ > 0 ? 1.0 : 0.0;
    case IntegerLawKind::poisson: return -std::expm1(-rate_);
    case IntegerLawKind::tabulated: return 1.0 - pmf_[0];
    case IntegerLawKind::heavy_tail: return 1.0;
  }
  return 0.0;
}

std::int64_t IntegerLaw::upper_bound() const {
  switch (kind_) {
    case IntegerLawKind::constant: return value_;
    case IntegerLawKind::tabulated: {
      auto k = static_cast<std::int64_t>(pmf_.size()) - 1;
      while (k > 0 && pmf_[static_cast<std::size_t>(k)] == 0.0) --k;
      return k;
    }
    default: throw LawError("integer law: " + describe() + " has unbounded support");
  }
}

bool IntegerLaw::has_finite_moment(double order) const noexcept {
  if (kind_ != IntegerLawKind::heavy_tail) return true;
  return order < rate_;
}

std::string IntegerLaw::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case IntegerLawKind::constant: out << "constant(" << value_ << ")"; break;
    case IntegerLawKind::poisson: out << "poisson(" << rate_ << ")"; break;
    case IntegerLawKind::tabulated: out << "tabulated" << pmf_string(pmf_); break;
    case IntegerLawKind::heavy_tail:
      out << "heavy-tail(" << rate_;
      if (scale_ != 1.0) out << ", scale=" << scale_;
      out << ")";
      break;
  }
  return out.str();
}

DownPeriodLaw DownPeriodLaw::geometric(double success_probability) {
  if (!(success_probability > 0.0 && success_probability <= 1.0)) {
    throw LawError("down-period law: geometric success probability must lie in (0, 1]");
  }
  return {DownPeriodKind::geometric, success_probability, 0};
}

DownPeriodLaw DownPeriodLaw::heavy_tail(double alpha, double scale) {
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw LawError("down-period law: tail exponent alpha must lie in (1/2, 1]");
  }
  if (!(scale > 0.0 && std::isfinite(scale))) {
    throw LawError("down-period law: heavy-tail scale must be finite and positive");
  }
  return {DownPeriodKind::heavy_tail, alpha, 0, scale};
}

DownPeriodLaw DownPeriodLaw::deterministic(std::int64_t duration) {
  if (duration < 1) throw LawError("down-period law: deterministic duration must be >= 1");
  return {DownPeriodKind::deterministic, 0.0, duration};
}

double DownPeriodLaw::mean() const noexcept {
  switch (kind_) {
    case DownPeriodKind::geometric: return 1.0 / param_;
    case DownPeriodKind::heavy_tail: return std::numeric_limits<double>::infinity();
    case DownPeriodKind::deterministic: return static_cast<double>(duration_);
  }
  return 0.0;
}

double DownPeriodLaw::survival(double t) const noexcept {
  if (t < 1.0) return 1.0;
  switch (kind_) {
    case DownPeriodKind::geometric: return std::pow(1.0 - param_, std::floor(t));
    case DownPeriodKind::heavy_tail: return std::min(1.0, scale_ * std::pow(std::floor(t), -param_));
    case DownPeriodKind::deterministic: return t < static_cast<double>(duration_) ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string DownPeriodLaw::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case DownPeriodKind::geometric: out << "geometric(" << param_ << ")"; break;
    case DownPeriodKind::heavy_tail:
      out << "heavy-tail(" << param_;
      if (scale_ != 1.0) out << ", scale=" << scale_;
      out << ")";
      break;
    case DownPeriodKind::deterministic: out << "deterministic(" << duration_ << ")"; break;
  }
  return out.str();
}

double MigrationParams::mean_migration_plus() const noexcept {
  return r * immigration_plus.mean() - p * (fam_emigration.mean() + ind_emigration.mean());
}

std::vector<std::string> MigrationParams::violations(double b) const {
  std::vector<std::string> out;
  for (auto [name, v] : {std::pair{"p", p}, std::pair{"q", q}, std::pair{"r", r}}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      out.push_back(std::string("migration: ") + name + " must lie in [0, 1]");
    }
  }
  if (std::abs(p + q + r - 1.0) > kProbabilitySumTolerance) {
    out.emplace_back("migration: probabilities must sum to 1 (p + q + r = " +
                     std::to_string(p + q + r) + ")");
  }
  if (!fam_emigration.bounded()) {
    out.emplace_back("migration: family emigration must have bounded support");
  }
  if (!ind_emigration.bounded()) {
    out.emplace_back("migration: individual emigration must have bounded support");
  }
  if (!std::isfinite(immigration_plus.mean())) {
    out.emplace_back("migration: immigration from a positive state must have finite mean");
  }
  if (immigration_zero.kind() == IntegerLawKind::heavy_tail &&
      immigration_zero.exponent() <= 0.5) {
    out.emplace_back("migration: heavy-tailed immigration at zero needs rho in (1/2, 1]");
  }
  if (!out.empty() || !(b > 0.0)) return out;

  // Moment conditions of the recurrence regime.
  const double th = theta(b);
  if (th == 0.0) {
    if (!immigration_plus.has_finite_moment(2.0)) {
      out.emplace_back("migration: theta = 0 requires E[I+^2] < infinity");
    }
  } else if (th < 0.0) {
    if (!immigration_plus.has_finite_moment(1.0 - th)) {
      out.emplace_back("migration: theta < 0 requires finite E[I+^(1-theta)] moments");
    }
  }
  return out;
}

void MigrationParams::validate(double b) const {
  const auto problems = violations(b);
  if (problems.empty()) return;
  std::string msg;
  for (const auto& p : problems) {
    if (!msg.empty()) msg += "; ";
    msg += p;
  }
  throw LawError(msg);
}

DownPeriodLaw native_down_period(const MigrationParams& migration) {
  const double pi0 = migration.r * migration.immigration_zero.prob_positive();
  if (!(pi0 > 0.0)) {
    throw LawError("native down-period: r * P(I^o > 0) = 0, zero is absorbing");
  }
  return DownPeriodLaw::geometric(pi0);
}

}  // namespace branchregen
