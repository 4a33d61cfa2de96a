#include "branchregen/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "branchregen/convergence.hpp"
#include "branchregen/transforms.hpp"

namespace branchregen {
namespace {

// Cycle-based estimates draw from streams far above the replication range.
constexpr std::uint64_t kCycleStreamOffset = std::uint64_t{1} << 48;
constexpr std::size_t kChunk = 256;

struct CycleSample {
  std::vector<std::int64_t> values;  // stopped chain at each horizon
  std::int64_t lifetime = 0;
  bool truncated = false;
};

// Runs `count` cycles of the stopped chain from a level drawn from I^o given
// positive. With run_to_end the cycle continues past the last horizon until
// it dies or reaches the cap, so the lifetime is known.
std::vector<CycleSample> simulate_cycles(const ExperimentConfig& cfg, std::int64_t count, bool run_to_end) {
  const auto n = static_cast<std::size_t>(count);
  std::vector<CycleSample> out(n);
  const auto& process = cfg.process;
  const auto& horizons = cfg.horizons;
  parallel_for_chunks(n, cfg.workers, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(cfg.seed, i);
      auto& s = out[i];
      s.values.assign(horizons.size(), 0);
      std::int64_t y = sample_integer_positive(process.migration.immigration_zero, rng);
      std::int64_t t = 0;
      std::size_t next = 0;
      const std::int64_t stop = run_to_end ? cfg.cycle_cap : horizons.back();
      while (y > 0) {
        while (next < horizons.size() && horizons[next] == t) s.values[next++] = y;
        if (t >= stop) break;
        y = step_stopped(y, process, rng);
        ++t;
      }
      s.lifetime = t;
      s.truncated = y > 0 && t >= cfg.cycle_cap;
    }
  });
  return out;
}

struct StationaryCycles {
  std::vector<CycleRecord> cycles;
  std::vector<std::int64_t> downs;
  std::int64_t truncated = 0;
};

StationaryCycles simulate_stationary_cycles(const ExperimentConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.cycles);
  std::vector<CycleRecord> records(n);
  std::vector<std::int64_t> downs(n);
  const auto down = cfg.down_law();
  parallel_for_chunks(n, cfg.workers, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(cfg.seed, kCycleStreamOffset + i);
      downs[i] = sample_down_period(down, rng);
      const auto level = sample_integer_positive(cfg.process.migration.immigration_zero, rng);
      records[i] = simulate_stopped_cycle(cfg.process, level, cfg.cycle_cap, rng);
    }
  });
  StationaryCycles out;
  for (std::size_t i = 0; i < n; ++i) {
    if (records[i].truncated) {
      ++out.truncated;
      continue;
    }
    out.cycles.push_back(std::move(records[i]));
    out.downs.push_back(downs[i]);
  }
  return out;
}

void enforce_truncation_limit(const ExperimentConfig& cfg, std::int64_t truncated, std::int64_t total) {
  const double fraction = static_cast<double>(truncated) / static_cast<double>(total);
  if (fraction > cfg.max_truncated_fraction) {
    std::ostringstream msg;
    msg << truncated << " of " << total << " cycles (" << fraction << ") reached the cycle cap "
        << cfg.cycle_cap << ", above max_truncated_fraction = " << cfg.max_truncated_fraction
        << "; raise cycle_cap or lower the horizon";
    throw ExperimentAborted(msg.str());
  }
}

CheckOutcome make_check(std::string name, double observed, double expected, double tolerance,
                        std::string detail = {}) {
  CheckOutcome c;
  c.name = std::move(name);
  c.observed = observed;
  c.expected = expected;
  c.tolerance = tolerance;
  c.passed = std::isfinite(observed) && std::abs(observed - expected) <= tolerance;
  c.detail = std::move(detail);
  return c;
}

// KS checks compare a distance with zero.
CheckOutcome ks_check(const ResultRecord& rec, double tolerance, const std::string& name = "ks") {
  std::ostringstream detail;
  detail << "KS at t = " << rec.horizons.back() << " over " << rec.sample_counts.back() << " samples vs "
         << rec.target_law;
  return make_check(name, rec.ks.back(), 0.0, tolerance, detail.str());
}

TailEstimateRecord tail_record(std::string name, const TailEstimate& e) {
  TailEstimateRecord r;
  r.name = std::move(name);
  r.method = e.method == TailMethod::hill ? "hill" : "log-log-regression";
  r.exponent = e.exponent;
  r.standard_error = e.standard_error;
  r.range_low = e.range_low;
  r.range_high = e.range_high;
  r.sample_count = static_cast<std::int64_t>(e.sample_count);
  r.power_tail = e.power_tail;
  return r;
}

void fill_from_report(ResultRecord& rec, const ConvergenceReport& report) {
  rec.ks = report.ks;
  rec.survival_fractions = report.survival_fractions;
  rec.sample_counts = report.sample_counts;
  rec.sample_means = report.sample_means;
  rec.target_law = report.target_law;
  rec.transform = report.transform;
  rec.conditional = report.conditional;
  rec.marginals = report.marginals;
}

ConvergenceSettings settings_for(const ExperimentConfig& cfg, MarginalTransform transform, bool conditional) {
  ConvergenceSettings s;
  s.horizons = cfg.horizons;
  s.replications = cfg.replications;
  s.seed = cfg.seed;
  s.workers = cfg.workers;
  s.transform = transform;
  s.condition_on_positive = conditional;
  s.b = cfg.process.b();
  return s;
}

ReplicationGenerator chain_generator(const ExperimentConfig& cfg) {
  const auto process = cfg.process;
  return [process](std::span<const std::int64_t> h, RngStream& rng) { return path_values_at(process, h, rng); };
}

ReplicationGenerator regenerative_generator(const ExperimentConfig& cfg) {
  const auto regen = cfg.regenerative();
  return [regen](std::span<const std::int64_t> h, RngStream& rng) {
    return regenerative_values_at(regen, h, rng);
  };
}

ReplicationValues cycle_values(const std::vector<CycleSample>& samples, const ExperimentConfig& cfg) {
  ReplicationValues v;
  v.horizons = cfg.horizons;
  v.replications = static_cast<std::int64_t>(samples.size());
  v.positive.assign(cfg.horizons.size(), {});
  v.zeros.assign(cfg.horizons.size(), 0);
  for (const auto& s : samples) {
    for (std::size_t h = 0; h < s.values.size(); ++h) {
      if (s.values[h] > 0) {
        v.positive[h].push_back(s.values[h]);
      } else {
        ++v.zeros[h];
      }
    }
  }
  return v;
}

void run_law_study(ResultRecord& rec, const ExperimentConfig& cfg, const ReplicationValues& values,
                   const LimitLaw& law, MarginalTransform transform, bool conditional) {
  const auto report = convergence_report(values, law, settings_for(cfg, transform, conditional));
  fill_from_report(rec, report);
  rec.reference_cdf = [law](double x) { return law.cdf(x); };
}

// Empirical c = A(t) / (1 - F(t)) at the last horizon from `cycles` lifetimes.
void add_tail_ratio_estimate(ResultRecord& rec, const ExperimentConfig& cfg) {
  ExperimentConfig local = cfg;
  local.seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;
  local.horizons = {cfg.horizons.back()};
  const auto samples = simulate_cycles(local, cfg.cycles, false);
  std::int64_t alive = 0;
  for (const auto& s : samples) alive += s.values.back() > 0 ? 1 : 0;
  const double t = static_cast<double>(cfg.horizons.back());
  const double up = static_cast<double>(alive) / static_cast<double>(samples.size());
  rec.references.push_back({"up_survival_at_horizon", up});
  rec.references.push_back({"down_survival_at_horizon", cfg.down_law().survival(t)});
  if (up > 0.0) rec.references.push_back({"c_estimate", cfg.down_law().survival(t) / up});
}

void add_stationary_study(ResultRecord& rec, const ExperimentConfig& cfg, const ReplicationValues& values,
                          bool conditional) {
  auto sc = std::make_shared<StationaryCycles>(simulate_stationary_cycles(cfg));
  rec.truncated_cycles += sc->truncated;
  enforce_truncation_limit(cfg, sc->truncated, cfg.cycles);
  if (sc->cycles.empty()) throw ExperimentAborted("every stationary cycle reached the cycle cap");

  auto cache = std::make_shared<std::map<std::int64_t, double>>();
  const auto stationary = [sc, cache, conditional](double x) {
    if (x < 0.0) return 0.0;
    const auto k = static_cast<std::int64_t>(std::floor(x));
    auto it = cache->find(k);
    if (it == cache->end()) {
      it = cache->emplace(k, stationary_cdf_estimate(sc->cycles, sc->downs, static_cast<double>(k), conditional))
               .first;
    }
    return it->second;
  };

  std::int64_t x_max = 0;
  for (const auto& c : sc->cycles) {
    x_max = std::max(x_max, *std::max_element(c.path.values.begin(), c.path.values.end()));
  }
  for (std::size_t h = 0; h < values.horizons.size(); ++h) {
    const auto marginal =
        marginal_at(values.values_at(h), values.horizons[h], MarginalTransform::identity, conditional);
    const auto& samples = marginal.distribution.samples();
    const auto top = samples.empty() ? 0 : static_cast<std::int64_t>(samples.back());
    rec.ks.push_back(stationary_discrepancy(marginal.distribution, stationary, std::max(x_max, top)));
    rec.survival_fractions.push_back(marginal.survival_fraction);
    rec.sample_counts.push_back(static_cast<std::int64_t>(marginal.distribution.count()));
    rec.sample_means.push_back(marginal.distribution.mean());
    rec.marginals.push_back(marginal.distribution);
  }
  std::int64_t occupied = 0;
  for (std::size_t j = 0; j < sc->cycles.size(); ++j) {
    occupied += sc->cycles[j].lifetime + (conditional ? 0 : sc->downs[j]);
  }
  rec.references.push_back({"stationary_cycles", static_cast<double>(sc->cycles.size())});
  rec.references.push_back({"mean_regeneration_period",
                            static_cast<double>(occupied) / static_cast<double>(sc->cycles.size())});
  rec.references.push_back({"stationary_zero_probability", stationary(0.0)});
  rec.target_law = conditional ? "cycle-occupation estimate (up periods)" : "cycle-occupation estimate";
  rec.transform = to_string(MarginalTransform::identity);
  rec.conditional = conditional;
  rec.reference_cdf = stationary;

  std::ostringstream detail;
  detail << "sup |F_n - S| at t = " << rec.horizons.back() << " over " << rec.sample_counts.back()
         << " samples vs " << sc->cycles.size() << " cycles";
  rec.checks.push_back(make_check("stationary", rec.ks.back(), 0.0, cfg.tolerances.stationary, detail.str()));
}

// Slope of log(1 - H) against log x on [10, 1000]: the tail exponent of an
// inverted law.
double inverted_tail_exponent(const LimitLaw& law) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (int i = 0; i <= 20; ++i) {
    const double x = 10.0 * std::pow(100.0, i / 20.0);
    const double s = 1.0 - law.cdf(x);
    if (!(s > 0.0)) continue;
    lx.push_back(std::log(x));
    ly.push_back(std::log(s));
  }
  if (lx.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return -sxy / sxx;
}

void run_cycle_lifetime(ResultRecord& rec, const ExperimentConfig& cfg) {
  const auto samples = simulate_cycles(cfg, cfg.replications, true);
  std::vector<double> lifetimes;
  lifetimes.reserve(samples.size());
  for (const auto& s : samples) {
    rec.truncated_cycles += s.truncated ? 1 : 0;
    lifetimes.push_back(static_cast<double>(s.lifetime));
  }
  enforce_truncation_limit(cfg, rec.truncated_cycles, cfg.replications);

  const double theta = cfg.process.theta();
  const auto& zero = cfg.process.migration.immigration_zero;
  const bool rho_regime = zero.kind() == IntegerLawKind::heavy_tail && theta + zero.exponent() < 1.0;
  const auto law = rho_regime ? cycle_rho_limit_law(theta, zero.exponent()) : LimitLaw::exponential();
  run_law_study(rec, cfg, cycle_values(samples, cfg), law, MarginalTransform::divide_by_bt, true);
  rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));

  const double expected = cfg.up_tail_exponent();
  rec.references.push_back({"expected_lifetime_exponent", expected});
  TailOptions options;
  options.range = cfg.tail_range;
  std::ostringstream detail;
  try {
    const auto regression = tail_exponent_estimate(lifetimes, TailMethod::log_log_regression, options);
    rec.tail_estimates.push_back(tail_record("lifetime", regression));
    const auto hill = tail_exponent_estimate(lifetimes, TailMethod::hill, options);
    rec.tail_estimates.push_back(tail_record("lifetime", hill));
    detail << "log-log regression of P(T_u > t) over [" << cfg.tail_range.first << ", " << cfg.tail_range.second
           << "], se " << regression.standard_error << "; Hill cross-check " << hill.exponent;
    rec.checks.push_back(make_check("tail_exponent", regression.exponent, expected, cfg.tolerances.tail_exponent,
                                    detail.str()));
  } catch (const std::invalid_argument& e) {
    rec.checks.push_back(make_check("tail_exponent", std::numeric_limits<double>::quiet_NaN(), expected,
                                    cfg.tolerances.tail_exponent, e.what()));
  }
}

void run_rho_cycle(ResultRecord& rec, const ExperimentConfig& cfg) {
  const auto samples = simulate_cycles(cfg, cfg.replications, false);
  const double theta = cfg.process.theta();
  const double rho = cfg.process.migration.immigration_zero.exponent();
  const auto law = cycle_rho_limit_law(theta, rho);
  run_law_study(rec, cfg, cycle_values(samples, cfg), law, MarginalTransform::divide_by_bt, true);
  rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
  const double slope = inverted_tail_exponent(law);
  rec.references.push_back({"rho", rho});
  rec.checks.push_back(make_check("inverted_tail_exponent", slope, rho, cfg.tolerances.tail_exponent,
                                  "slope of log(1 - H(x)) over x in [10, 1000]"));
}

void run_regenerative_law(ResultRecord& rec, const ExperimentConfig& cfg, const LimitLaw& law,
                          MarginalTransform transform, bool conditional) {
  const auto values = run_replications(regenerative_generator(cfg), cfg.horizons, cfg.replications, cfg.seed,
                                       cfg.workers);
  run_law_study(rec, cfg, values, law, transform, conditional);
}

void run_main_II(ResultRecord& rec, const ExperimentConfig& cfg) {
  run_regenerative_law(rec, cfg, LimitLaw::unit_uniform(), MarginalTransform::log_over_log_t, true);
  rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
  const auto down = cfg.down_law();
  if (down.kind() != DownPeriodKind::heavy_tail) return;

  const double atom = cfg.c.is_infinite() ? 1.0 : cfg.c.value() / (cfg.c.value() + 1.0);
  rec.references.push_back({"zero_atom", atom});
  const double zero_fraction = 1.0 - rec.survival_fractions.back();
  std::ostringstream detail;
  detail << "P(Z_t = 0) at t = " << rec.horizons.back() << " vs c/(c+1) with c = " << cfg.c.describe();
  rec.checks.push_back(make_check("zero_atom", zero_fraction, atom, cfg.tolerances.atom, detail.str()));
  if (!cfg.c.is_infinite() && cfg.c.value() > 0.0) add_tail_ratio_estimate(rec, cfg);
}

LimitLaw custom_law(const CustomTarget& t) {
  using K = CustomTarget::Kind;
  switch (t.kind) {
    case K::gamma: return LimitLaw::gamma(t.theta);
    case K::exponential: return LimitLaw::exponential();
    case K::unit_uniform: return LimitLaw::unit_uniform();
    case K::shifted_uniform: return LimitLaw::shifted_uniform(t.c);
    case K::main: return LimitLaw::exp_beta_mixture(t.theta, t.c);
    case K::main_conditional: return LimitLaw::exp_beta_mixture_conditional(t.theta, t.alpha);
    case K::point_mass: return LimitLaw::point_mass(t.at);
    case K::none: break;
  }
  return LimitLaw::point_mass(0.0);
}

void run_custom(ResultRecord& rec, const ExperimentConfig& cfg) {
  const auto& spec = cfg.custom;
  ReplicationValues values;
  switch (spec.generator) {
    case CustomGenerator::chain:
      values = run_replications(chain_generator(cfg), cfg.horizons, cfg.replications, cfg.seed, cfg.workers);
      break;
    case CustomGenerator::regenerative:
      values = run_replications(regenerative_generator(cfg), cfg.horizons, cfg.replications, cfg.seed,
                                cfg.workers);
      break;
    case CustomGenerator::cycle:
      values = cycle_values(simulate_cycles(cfg, cfg.replications, false), cfg);
      break;
  }
  run_law_study(rec, cfg, values, custom_law(spec.target), spec.transform, spec.condition_on_positive);
  if (spec.target.kind == CustomTarget::Kind::none) {
    rec.target_law = "none";
    rec.ks.clear();
    rec.reference_cdf = nullptr;
    return;
  }
  rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
}

}  // namespace

bool ResultRecord::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

const CheckOutcome& ResultRecord::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("result record has no check named '" + name + "'");
}

double stationary_discrepancy(const EmpiricalDistribution& marginal,
                              const std::function<double(double)>& stationary_cdf, std::int64_t x_max) {
  double d = 0.0;
  for (std::int64_t x = 0; x <= x_max; ++x) {
    const auto xv = static_cast<double>(x);
    d = std::max(d, std::abs(marginal.ecdf(xv) - stationary_cdf(xv)));
  }
  return d;
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
  const auto problems = cfg.violations();
  if (!problems.empty()) throw ConfigError(problems);
  const auto start = std::chrono::steady_clock::now();

  ResultRecord rec;
  rec.schema_version = cfg.schema_version;
  rec.experiment = to_string(cfg.experiment);
  rec.config_digest = config_digest(cfg);
  rec.seed = cfg.seed;
  rec.replications = cfg.replications;
  rec.b = cfg.process.b();
  rec.theta = cfg.process.theta();
  rec.recurrence = to_string(classify_recurrence(rec.theta));
  rec.c_regime = cfg.c.describe();
  rec.horizons = cfg.horizons;

  const double theta = rec.theta;
  switch (cfg.experiment) {
    case ExperimentKind::theorem_old_I: {
      const auto values =
          run_replications(chain_generator(cfg), cfg.horizons, cfg.replications, cfg.seed, cfg.workers);
      run_law_study(rec, cfg, values, LimitLaw::gamma(theta), MarginalTransform::divide_by_bt, false);
      rec.references.push_back({"mean", theta});
      rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
      break;
    }
    case ExperimentKind::theorem_old_II: {
      const auto values =
          run_replications(chain_generator(cfg), cfg.horizons, cfg.replications, cfg.seed, cfg.workers);
      run_law_study(rec, cfg, values, LimitLaw::unit_uniform(), MarginalTransform::log_over_log_t, true);
      rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
      break;
    }
    case ExperimentKind::theorem_old_III: {
      const auto values =
          run_replications(chain_generator(cfg), cfg.horizons, cfg.replications, cfg.seed, cfg.workers);
      add_stationary_study(rec, cfg, values, false);
      break;
    }
    case ExperimentKind::cycle_lifetime:
      run_cycle_lifetime(rec, cfg);
      break;
    case ExperimentKind::theorem_main_Ia: {
      run_regenerative_law(rec, cfg, LimitLaw::exp_beta_mixture(theta, cfg.c), MarginalTransform::divide_by_bt,
                           false);
      const double mean = theta / (cfg.c.value() + 1.0);
      rec.references.push_back({"mean", mean});
      rec.references.push_back({"zero_atom", 0.0});
      rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
      rec.checks.push_back(make_check("mean", rec.sample_means.back(), mean, cfg.tolerances.mean,
                                      "sample mean of Z_t/(bt) vs theta/(c+1)"));
      if (cfg.c.value() > 0.0) add_tail_ratio_estimate(rec, cfg);
      break;
    }
    case ExperimentKind::theorem_main_Ib: {
      const double alpha = cfg.down_law().alpha();
      run_regenerative_law(rec, cfg, LimitLaw::exp_beta_mixture_conditional(theta, alpha),
                           MarginalTransform::divide_by_bt, true);
      const double mean = theta / (theta + alpha);
      rec.references.push_back({"conditional_mean", mean});
      rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
      rec.checks.push_back(make_check("mean", rec.sample_means.back(), mean, cfg.tolerances.mean,
                                      "conditional sample mean vs theta/(theta+alpha)"));
      break;
    }
    case ExperimentKind::theorem_main_II:
      run_main_II(rec, cfg);
      break;
    case ExperimentKind::theorem_main_III: {
      const auto values = run_replications(regenerative_generator(cfg), cfg.horizons, cfg.replications,
                                           cfg.seed, cfg.workers);
      add_stationary_study(rec, cfg, values, cfg.down_law().kind() == DownPeriodKind::heavy_tail);
      break;
    }
    case ExperimentKind::theorem_rho_cycle:
      run_rho_cycle(rec, cfg);
      break;
    case ExperimentKind::theorem_rho_II: {
      const double rho = cfg.process.migration.immigration_zero.exponent();
      if (cfg.c.is_infinite()) {
        run_regenerative_law(rec, cfg, rho_limit_law_conditional(theta, rho, cfg.down_law().alpha()),
                             MarginalTransform::divide_by_bt, true);
      } else {
        run_regenerative_law(rec, cfg, rho_limit_law(theta, rho, cfg.c), MarginalTransform::divide_by_bt, false);
        const double atom = cfg.c.value() / (cfg.c.value() + 1.0);
        rec.references.push_back({"zero_atom", atom});
        rec.references.push_back({"observed_zero_fraction", 1.0 - rec.survival_fractions.back()});
      }
      rec.checks.push_back(ks_check(rec, cfg.tolerances.ks));
      break;
    }
    case ExperimentKind::custom:
      run_custom(rec, cfg);
      break;
  }

  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

Trajectory replication_trajectory(const ExperimentConfig& cfg, std::int64_t index) {
  if (index < 0) throw std::invalid_argument("replication index must be nonnegative");
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(index));
  const std::int64_t horizon = cfg.horizons.back();
  bool cycle = cfg.experiment == ExperimentKind::cycle_lifetime ||
               cfg.experiment == ExperimentKind::theorem_rho_cycle;
  bool chain = cfg.experiment == ExperimentKind::theorem_old_I || cfg.experiment == ExperimentKind::theorem_old_II ||
               cfg.experiment == ExperimentKind::theorem_old_III;
  if (cfg.experiment == ExperimentKind::custom) {
    cycle = cfg.custom.generator == CustomGenerator::cycle;
    chain = cfg.custom.generator == CustomGenerator::chain;
  }
  if (chain) return simulate_path(cfg.process, horizon, rng);
  if (cycle) {
    Trajectory out;
    std::int64_t y = sample_integer_positive(cfg.process.migration.immigration_zero, rng);
    out.values.push_back(y);
    for (std::int64_t t = 0; t < horizon; ++t) {
      y = step_stopped(y, cfg.process, rng);
      out.values.push_back(y);
    }
    return out;
  }
  return assemble_regenerative(cfg.regenerative(), rng).z;
}

}  // namespace branchregen
