// Acceptance run: the twelve numbered criteria at their stated tolerances.
// Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "branchregen/convergence.hpp"
#include "branchregen/experiments.hpp"
#include "branchregen/limits.hpp"
#include "branchregen/outputs.hpp"
#include "branchregen/special.hpp"
#include "branchregen/transforms.hpp"

using namespace branchregen;

namespace {

struct Verdict {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [failed]");
  }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

ExperimentConfig config(ExperimentKind kind, const std::string& extra = "") {
  return parse_config("schema_version: 1\nexperiment: " + to_string(kind) + "\n" + extra);
}

// Adds every named check of a record to the verdict.
void require_checks(Verdict& v, const ResultRecord& r, const std::vector<std::string>& names,
                    const std::string& label = "") {
  for (const auto& name : names) {
    const auto& c = r.check(name);
    v.require(c.passed, label + name + " " + fmt(c.observed) + " vs " + fmt(c.expected) + " +- " + fmt(c.tolerance));
  }
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

void criterion_1(Verdict& v) {
  double worst = 0;
  for (const double theta : {0.1, 0.25, 0.4}) {
    for (const double x : grid(0.05, 5.0, 20)) {
      worst = std::max(worst, std::abs(main_limit_cdf(x, theta, TailRatio::zero()) - gamma_cdf(x, theta)));
    }
  }
  v.require(worst <= 1e-8, "max |main_limit_cdf - gamma_cdf| = " + fmt(worst, 3) + " (<= 1e-8)");
}

void criterion_2(Verdict& v) {
  const auto r = run_experiment(config(ExperimentKind::cycle_lifetime));
  require_checks(v, r, {"ks"});
  v.require(r.sample_counts.back() >= 10'000, "surviving cycles " + std::to_string(r.sample_counts.back()) + " (>= 1e4)");
}

void criterion_3(Verdict& v) {
  const auto theta0 = run_experiment(config(ExperimentKind::cycle_lifetime, "replications: 1000000\nhorizons: [100]\n"));
  require_checks(v, theta0, {"tail_exponent"}, "theta=0 ");
  const auto theta25 = run_experiment(config(ExperimentKind::cycle_lifetime, R"(replications: 1000000
horizons: [100]
process:
  offspring: {kind: binary}
  migration: {p: 0, q: 0.875, r: 0.125, immigration_plus: 1, immigration_zero: 1}
)"));
  require_checks(v, theta25, {"tail_exponent"}, "theta=0.25 ");
}

void criterion_4(Verdict& v) {
  const auto r = run_experiment(config(ExperimentKind::theorem_main_Ia));
  require_checks(v, r, {"ks", "mean"});
}

void criterion_5(Verdict& v) {
  const auto r = run_experiment(config(ExperimentKind::theorem_main_Ib));
  require_checks(v, r, {"ks", "mean"});
}

void criterion_6(Verdict& v) {
  const auto r = run_experiment(config(ExperimentKind::theorem_main_II));
  require_checks(v, r, {"ks"});
}

void criterion_7(Verdict& v) {
  const auto r = run_experiment(
      config(ExperimentKind::theorem_main_II, "down_period: {kind: heavy-tail, alpha: 0.8}\nc_regime: infinite\n"));
  require_checks(v, r, {"zero_atom", "ks"});
}

void criterion_8(Verdict& v) {
  const auto r = run_experiment(config(ExperimentKind::theorem_main_III));
  require_checks(v, r, {"stationary"});
}

void criterion_9(Verdict& v) {
  double phi_err = 0;
  for (int i = 0; i < 20; ++i) {
    const double l = std::pow(10.0, -2 + 5.0 * i / 19);
    for (const double rho : {0.6, 0.8}) {
      phi_err = std::max(phi_err, std::abs(phi_laplace(l, 0.0, rho) - (1 - std::pow(l / (1 + l), rho))));
    }
  }
  v.require(phi_err <= 1e-10, "phi at theta=0 max error " + fmt(phi_err, 3) + " (<= 1e-10)");
  double lt1_err = 0, lt2_err = 0;
  for (int i = 0; i < 10; ++i) {
    const double l = std::pow(10.0, -2 + 4.0 * i / 9);
    for (const double theta : {0.0, 0.1}) {
      lt1_err = std::max(lt1_err, std::abs(lt1(l, theta, 0.8, TailRatio::finite(0.5)) -
                                           lt1_mixture(l, theta, 0.8, TailRatio::finite(0.5))));
      lt2_err = std::max(lt2_err, std::abs(lt2(l, theta, 0.8, 0.7) - lt2_mixture(l, theta, 0.8, 0.7)));
    }
  }
  v.require(lt1_err <= 1e-8, "lt1 mixture identity " + fmt(lt1_err, 3) + " (<= 1e-8)");
  v.require(lt2_err <= 1e-8, "lt2 mixture identity " + fmt(lt2_err, 3) + " (<= 1e-8)");
}

void criterion_10(Verdict& v) {
  const auto r = run_experiment(config(ExperimentKind::theorem_rho_cycle));
  require_checks(v, r, {"ks", "inverted_tail_exponent"});
}

// Regenerative process with the chain's own geometric downs against the
// chain started at zero, at t = 500.
void criterion_11(Verdict& v) {
  ProcessConfig p;
  p.offspring = OffspringLaw::binary();
  p.migration = MigrationParams{0, 0.85, 0.15, IntegerLaw::constant(1), IntegerLaw::constant(1)};
  RegenerativeConfig rc;
  rc.process = p;
  rc.down = native_down_period(p.migration);
  rc.horizon = 500;
  const std::vector<std::int64_t> t{500};
  const std::int64_t n = 100'000;
  const ReplicationGenerator chain = [&](std::span<const std::int64_t> h, RngStream& rng) {
    return path_values_at(p, h, rng);
  };
  const ReplicationGenerator regen = [&](std::span<const std::int64_t> h, RngStream& rng) {
    return regenerative_values_at(rc, h, rng);
  };
  const auto a = run_replications(chain, t, n, 2024, 0);
  const auto b = run_replications(regen, t, n, 2024, 0, std::uint64_t{1} << 40);
  auto as_doubles = [](const std::vector<std::int64_t>& x) { return std::vector<double>(x.begin(), x.end()); };
  const double d = ks_two_sample(EmpiricalDistribution(as_doubles(a.values_at(0))),
                                 EmpiricalDistribution(as_doubles(b.values_at(0))));
  v.require(d <= 0.02, "two-sample KS " + fmt(d) + " over " + std::to_string(n) + " replications each (<= 0.02)");
}

void criterion_12(Verdict& v) {
  auto cfg = config(ExperimentKind::theorem_main_Ia);
  std::string reference;
  for (const int workers : {1, 4, 8}) {
    cfg.workers = workers;
    const auto json = to_json(run_experiment(cfg), false);
    if (reference.empty()) {
      reference = json;
      continue;
    }
    v.require(json == reference, std::to_string(workers) + " workers identical to 1 worker");
  }
}

struct Criterion {
  int number;
  std::string title;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("criteria", only, "run only these criteria (1-12)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "main limit at c = 0 equals Gamma(theta)", criterion_1},
      {2, "cycle Y/(bt) given survival vs Exp(1), theta = 0, t = 2000", criterion_2},
      {3, "cycle lifetime tail exponent 1 - theta, theta in {0, 0.25}", criterion_3},
      {4, "regenerative limit, c = 0, theta = 0.3, t = 2000", criterion_4},
      {5, "conditional regenerative limit, c infinite, alpha = 0.6", criterion_5},
      {6, "log Z/log t given Z > 0 vs U(0,1), theta = 0, t = 1e5", criterion_6},
      {7, "theta = 0 with heavy downs alpha = 0.8: zero atom and uniform part", criterion_7},
      {8, "theta = -0.5: marginal vs cycle-occupation stationary law", criterion_8},
      {9, "phi closed form and lt1/lt2 mixture identities", criterion_9},
      {10, "heavy immigration at zero, rho = 0.8: cycle law vs inverted phi", criterion_10},
      {11, "regenerative assembly reproduces the chain marginal at t = 500", criterion_11},
      {12, "identical records across 1, 4 and 8 workers", criterion_12},
  };
  const std::set<int> selected(only.begin(), only.end());

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.passed;
    std::printf("criterion %2d %s  %s: %s  (%.1f s)\n", c.number, v.passed ? "PASS" : "FAIL", c.title.c_str(),
                v.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
