#include "branchregen/experiment_config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace branchregen {
namespace {

constexpr double kThetaZeroTolerance = 1e-12;
constexpr double kExponentTolerance = 1e-12;

struct ExperimentInfo {
  ExperimentKind kind;
  const char* name;
  const char* summary;
};

constexpr ExperimentInfo kExperiments[] = {
    {ExperimentKind::theorem_old_I, "theorem-old-I",
     "chain Y_t/(bt) against Gamma(theta, 1) for theta > 0"},
    {ExperimentKind::theorem_old_II, "theorem-old-II",
     "chain log Y_t / log t given Y_t > 0 against U(0, 1) for theta = 0"},
    {ExperimentKind::theorem_old_III, "theorem-old-III",
     "chain marginal against the cycle-occupation stationary law for theta < 0"},
    {ExperimentKind::cycle_lifetime, "cycle-lifetime",
     "lifetime tail exponent of a cycle and its conditional law Y^o_t/(bt)"},
    {ExperimentKind::theorem_main_Ia, "theorem-main-Ia",
     "regenerative Z_t/(bt) against the exp-beta mixture, 0 < theta < 1/2, finite c"},
    {ExperimentKind::theorem_main_Ib, "theorem-main-Ib",
     "regenerative Z_t/(bt) given Z_t > 0, 0 < theta < 1/2, c infinite"},
    {ExperimentKind::theorem_main_II, "theorem-main-II",
     "regenerative log Z_t / log t for theta = 0: zero atom and uniform part"},
    {ExperimentKind::theorem_main_III, "theorem-main-III",
     "regenerative marginal against the cycle-occupation stationary law, theta < 0"},
    {ExperimentKind::theorem_rho_cycle, "theorem-rho-cycle",
     "cycle law with heavy immigration at zero against the inverted transform phi"},
    {ExperimentKind::theorem_rho_II, "theorem-rho-II",
     "regenerative law with heavy immigration at zero against inverted lt1 or lt2"},
    {ExperimentKind::custom, "custom", "user-assembled generator, transform and target law"},
};

const char* kCommonDefaults = R"(schema_version: 1
seed: 271828
workers: 1
cycles: 10000
cycle_cap: 10000000
max_truncated_fraction: 0.01
c_regime: zero
tail_range: [100, 10000]
tolerances: {ks: 0.05, mean: 0.02, tail_exponent: 0.1, atom: 0.03, stationary: 0.03}
output: {directory: results, formats: [json]}
)";

// theta = r * 500 / 250 = 0.3 with b = 250.
const char* kThetaPoint3Process = R"(process:
  initial: 0
  offspring: {kind: three-point, k: 1001}
  migration:
    p: 0
    q: 0.85
    r: 0.15
    immigration_plus: 500
    immigration_zero: 500
)";

const char* kThetaZeroProcess = R"(process:
  initial: 0
  offspring: {kind: binary}
  migration:
    p: 0
    q: 0
    r: 1
    immigration_plus: 0
    immigration_zero: 1
)";

// theta = (0.25 * 1 - 0.5 * 1) / 0.5 = -0.5.
const char* kThetaNegativeProcess = R"(process:
  initial: 0
  offspring: {kind: binary}
  migration:
    p: 0.5
    q: 0.25
    r: 0.25
    immigration_plus: 1
    immigration_zero: 1
    family_emigration: 0
    individual_emigration: 1
)";

// theta = 0.05 / 0.5 = 0.1, rho = 0.8.
const char* kRhoProcess = R"(process:
  initial: 0
  offspring: {kind: binary}
  migration:
    p: 0
    q: 0.95
    r: 0.05
    immigration_plus: 1
    immigration_zero: {kind: heavy-tail, exponent: 0.8}
)";

std::string specific_defaults(ExperimentKind kind) {
  std::string s;
  switch (kind) {
    case ExperimentKind::theorem_old_I:
      s = "replications: 10000\nhorizons: [250, 500, 1000, 2000]\n";
      s += kThetaPoint3Process;
      s += "down_period: {kind: native}\ntolerances: {ks: 0.03}\n";
      break;
    case ExperimentKind::theorem_old_II:
      s = "replications: 10000\nhorizons: [1000, 10000, 100000]\n";
      s += kThetaZeroProcess;
      s += "down_period: {kind: native}\ntolerances: {ks: 0.10}\n";
      break;
    case ExperimentKind::theorem_old_III:
      s = "replications: 10000\nhorizons: [1000, 10000]\ncycles: 10000\n";
      s += kThetaNegativeProcess;
      s += "down_period: {kind: native}\ntolerances: {stationary: 0.03}\n";
      break;
    case ExperimentKind::cycle_lifetime:
      s = "replications: 12000000\nhorizons: [250, 500, 1000, 2000]\n";
      s += R"(process:
  initial: 0
  offspring: {kind: binary}
  migration: {p: 0, q: 1, r: 0, immigration_plus: 0, immigration_zero: 1}
)";
      s += "down_period: {kind: native}\ntolerances: {ks: 0.03, tail_exponent: 0.1}\n";
      break;
    case ExperimentKind::theorem_main_Ia:
      s = "replications: 10000\nhorizons: [250, 500, 1000, 2000]\n";
      s += kThetaPoint3Process;
      s += "down_period: {kind: native}\nc_regime: zero\ntolerances: {ks: 0.03, mean: 0.02}\n";
      break;
    case ExperimentKind::theorem_main_Ib:
      s = "replications: 10000\nhorizons: [250, 500, 1000, 2000]\n";
      s += kThetaPoint3Process;
      s += "down_period: {kind: heavy-tail, alpha: 0.6}\nc_regime: infinite\n"
           "tolerances: {ks: 0.05, mean: 0.03}\n";
      break;
    case ExperimentKind::theorem_main_II:
      s = "replications: 10000\nhorizons: [1000, 10000, 100000]\n";
      s += kThetaZeroProcess;
      s += "down_period: {kind: native}\nc_regime: zero\ntolerances: {ks: 0.10, atom: 0.03}\n";
      break;
    case ExperimentKind::theorem_main_III:
      s = "replications: 10000\nhorizons: [1000, 10000]\ncycles: 10000\n";
      s += kThetaNegativeProcess;
      s += "down_period: {kind: native}\ntolerances: {stationary: 0.03}\n";
      break;
    case ExperimentKind::theorem_rho_cycle:
      s = "replications: 2000000\nhorizons: [250, 500, 1000, 2000]\n";
      s += kRhoProcess;
      s += "down_period: {kind: native}\ntolerances: {ks: 0.05, tail_exponent: 0.1}\n";
      break;
    case ExperimentKind::theorem_rho_II:
      s = "replications: 10000\nhorizons: [250, 500, 1000, 2000]\n";
      s += kRhoProcess;
      s += "down_period: {kind: native}\nc_regime: zero\ntolerances: {ks: 0.05}\n";
      break;
    case ExperimentKind::custom:
      s = "replications: 1000\nhorizons: [100, 1000]\n";
      s += R"(process:
  initial: 0
  offspring: {kind: binary}
  migration: {p: 0, q: 0.7, r: 0.3, immigration_plus: 1, immigration_zero: 1}
down_period: {kind: native}
custom:
  generator: regenerative
  transform: divide-by-bt
  condition_on_positive: false
  target: {law: gamma, theta: 0.6}
)";
      break;
  }
  return s;
}

// Maps merge key by key; a map carrying "kind" or "law" replaces the default
// wholesale so parameters of a different kind never leak through.
YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!over.IsMap() || !base.IsMap() || over["kind"] || over["law"]) return YAML::Clone(over);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) {
    const auto key = kv.first.as<std::string>();
    out[key] = base[key] ? merge(base[key], kv.second) : YAML::Clone(kv.second);
  }
  return out;
}

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& message) {
    errors.push_back(path + ": " + message);
  }

  void allow_keys(const YAML::Node& node, const std::string& path, std::set<std::string> allowed) {
    if (!node.IsMap()) return;
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        fail(path.empty() ? key : path + "." + key, "unknown key");
      }
    }
  }

  template <typename T>
  std::optional<T> scalar(const YAML::Node& node, const std::string& path, const char* expected) {
    if (!node || !node.IsScalar()) {
      fail(path, std::string("expected ") + expected);
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(path, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  double number(const YAML::Node& node, const std::string& path, double fallback = 0.0) {
    return scalar<double>(node, path, "a number").value_or(fallback);
  }
  std::int64_t integer(const YAML::Node& node, const std::string& path, std::int64_t fallback = 0) {
    return scalar<std::int64_t>(node, path, "an integer").value_or(fallback);
  }
  bool boolean(const YAML::Node& node, const std::string& path) {
    return scalar<bool>(node, path, "true or false").value_or(false);
  }
  std::string text(const YAML::Node& node, const std::string& path) {
    return scalar<std::string>(node, path, "a string").value_or("");
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& path) {
    std::vector<double> out;
    if (!node || !node.IsSequence()) {
      fail(path, "expected a list of numbers");
      return out;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  // Runs a law factory, turning LawError into a recorded violation.
  template <typename F>
  auto guarded(const std::string& path, F&& make) -> std::optional<decltype(make())> {
    try {
      return make();
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
      return std::nullopt;
    }
  }

  OffspringLaw offspring(const YAML::Node& node, const std::string& path) {
    if (!node || !node.IsMap()) {
      fail(path, "expected a map with a 'kind' key");
      return OffspringLaw::binary();
    }
    const auto kind = text(node["kind"], path + ".kind");
    std::optional<OffspringLaw> law;
    if (kind == "binary") {
      allow_keys(node, path, {"kind"});
      law = OffspringLaw::binary();
    } else if (kind == "shifted-geometric") {
      allow_keys(node, path, {"kind"});
      law = OffspringLaw::shifted_geometric();
    } else if (kind == "unit-poisson") {
      allow_keys(node, path, {"kind"});
      law = OffspringLaw::unit_poisson();
    } else if (kind == "tabulated") {
      allow_keys(node, path, {"kind", "pmf"});
      auto pmf = numbers(node["pmf"], path + ".pmf");
      law = guarded(path, [&] { return OffspringLaw::tabulated(pmf); });
    } else if (kind == "three-point") {
      allow_keys(node, path, {"kind", "k"});
      const auto k = integer(node["k"], path + ".k");
      if (k < 2) {
        fail(path + ".k", "three-point offspring needs k >= 2");
      } else {
        std::vector<double> pmf(static_cast<std::size_t>(k) + 1, 0.0);
        pmf[1] = 0.5;
        pmf[static_cast<std::size_t>(k)] = 0.5 / static_cast<double>(k);
        pmf[0] = 0.5 - pmf[static_cast<std::size_t>(k)];
        law = guarded(path, [&] { return OffspringLaw::tabulated(pmf); });
      }
    } else if (!kind.empty()) {
      fail(path + ".kind",
           "unknown offspring kind '" + kind +
               "' (expected binary, shifted-geometric, unit-poisson, tabulated or three-point)");
    }
    return law.value_or(OffspringLaw::binary());
  }

  IntegerLaw integer_law(const YAML::Node& node, const std::string& path) {
    if (node && node.IsScalar()) {
      const auto v = integer(node, path);
      return guarded(path, [&] { return IntegerLaw::constant(v); }).value_or(IntegerLaw::constant(0));
    }
    if (!node || !node.IsMap()) {
      fail(path, "expected an integer or a map with a 'kind' key");
      return IntegerLaw::constant(0);
    }
    const auto kind = text(node["kind"], path + ".kind");
    std::optional<IntegerLaw> law;
    if (kind == "constant") {
      allow_keys(node, path, {"kind", "value"});
      const auto v = integer(node["value"], path + ".value");
      law = guarded(path, [&] { return IntegerLaw::constant(v); });
    } else if (kind == "poisson") {
      allow_keys(node, path, {"kind", "mean"});
      const auto m = number(node["mean"], path + ".mean");
      law = guarded(path, [&] { return IntegerLaw::poisson(m); });
    } else if (kind == "tabulated") {
      allow_keys(node, path, {"kind", "pmf"});
      auto pmf = numbers(node["pmf"], path + ".pmf");
      law = guarded(path, [&] { return IntegerLaw::tabulated(pmf); });
    } else if (kind == "heavy-tail") {
      allow_keys(node, path, {"kind", "exponent", "scale"});
      const auto e = number(node["exponent"], path + ".exponent");
      const double scale = node["scale"] ? number(node["scale"], path + ".scale", 1.0) : 1.0;
      law = guarded(path, [&] { return IntegerLaw::heavy_tail(e, scale); });
    } else if (!kind.empty()) {
      fail(path + ".kind",
           "unknown law kind '" + kind + "' (expected constant, poisson, tabulated or heavy-tail)");
    }
    return law.value_or(IntegerLaw::constant(0));
  }

  // Empty result means native.
  std::optional<DownPeriodLaw> down_period(const YAML::Node& node, const std::string& path) {
    if (!node || !node.IsMap()) {
      fail(path, "expected a map with a 'kind' key");
      return std::nullopt;
    }
    const auto kind = text(node["kind"], path + ".kind");
    if (kind == "native") {
      allow_keys(node, path, {"kind"});
      return std::nullopt;
    }
    if (kind == "geometric") {
      allow_keys(node, path, {"kind", "success_probability"});
      const auto p = number(node["success_probability"], path + ".success_probability");
      return guarded(path, [&] { return DownPeriodLaw::geometric(p); });
    }
    if (kind == "heavy-tail") {
      allow_keys(node, path, {"kind", "alpha", "scale"});
      const auto a = number(node["alpha"], path + ".alpha");
      const double scale = node["scale"] ? number(node["scale"], path + ".scale", 1.0) : 1.0;
      return guarded(path, [&] { return DownPeriodLaw::heavy_tail(a, scale); });
    }
    if (kind == "deterministic") {
      allow_keys(node, path, {"kind", "duration"});
      const auto d = integer(node["duration"], path + ".duration");
      return guarded(path, [&] { return DownPeriodLaw::deterministic(d); });
    }
    if (!kind.empty()) {
      fail(path + ".kind", "unknown down-period kind '" + kind +
                               "' (expected native, geometric, heavy-tail or deterministic)");
    }
    return std::nullopt;
  }

  TailRatio tail_ratio(const YAML::Node& node, const std::string& path) {
    if (node && node.IsScalar()) {
      const auto& s = node.Scalar();
      if (s == "zero") return TailRatio::zero();
      if (s == "infinite") return TailRatio::infinite();
      const auto v = scalar<double>(node, path, "zero, infinite or a nonnegative number");
      if (v) {
        if (*v >= 0.0 && std::isfinite(*v)) return TailRatio::finite(*v);
        fail(path, "a finite c must be a nonnegative number");
      }
      return TailRatio::zero();
    }
    fail(path, "expected zero, infinite or a nonnegative number");
    return TailRatio::zero();
  }
};

void decode_custom(Reader& in, const YAML::Node& node, CustomSpec& out) {
  if (!node || !node.IsMap()) {
    in.fail("custom", "expected a map");
    return;
  }
  in.allow_keys(node, "custom", {"generator", "transform", "condition_on_positive", "target"});
  const auto gen = in.text(node["generator"], "custom.generator");
  if (gen == "chain") {
    out.generator = CustomGenerator::chain;
  } else if (gen == "regenerative") {
    out.generator = CustomGenerator::regenerative;
  } else if (gen == "cycle") {
    out.generator = CustomGenerator::cycle;
  } else if (!gen.empty()) {
    in.fail("custom.generator", "unknown generator '" + gen + "' (expected chain, regenerative or cycle)");
  }
  const auto tr = in.text(node["transform"], "custom.transform");
  try {
    if (!tr.empty()) out.transform = marginal_transform_from_string(tr);
  } catch (const std::invalid_argument& e) {
    in.fail("custom.transform", e.what());
  }
  out.condition_on_positive = in.boolean(node["condition_on_positive"], "custom.condition_on_positive");

  const auto target = node["target"];
  const std::string path = "custom.target";
  if (!target || !target.IsMap()) {
    in.fail(path, "expected a map with a 'law' key");
    return;
  }
  auto& t = out.target;
  const auto law = in.text(target["law"], path + ".law");
  using K = CustomTarget::Kind;
  if (law == "none") {
    in.allow_keys(target, path, {"law"});
    t.kind = K::none;
  } else if (law == "gamma") {
    in.allow_keys(target, path, {"law", "theta"});
    t.kind = K::gamma;
    t.theta = in.number(target["theta"], path + ".theta");
    if (!(t.theta > 0.0)) in.fail(path + ".theta", "gamma shape must be positive");
  } else if (law == "exponential") {
    in.allow_keys(target, path, {"law"});
    t.kind = K::exponential;
  } else if (law == "unit-uniform") {
    in.allow_keys(target, path, {"law"});
    t.kind = K::unit_uniform;
  } else if (law == "shifted-uniform") {
    in.allow_keys(target, path, {"law", "c"});
    t.kind = K::shifted_uniform;
    t.c = in.tail_ratio(target["c"], path + ".c");
  } else if (law == "main") {
    in.allow_keys(target, path, {"law", "theta", "c"});
    t.kind = K::main;
    t.theta = in.number(target["theta"], path + ".theta");
    t.c = in.tail_ratio(target["c"], path + ".c");
    if (!(t.theta > 0.0 && t.theta < 0.5)) in.fail(path + ".theta", "theta must lie in (0, 1/2)");
  } else if (law == "main-conditional") {
    in.allow_keys(target, path, {"law", "theta", "alpha"});
    t.kind = K::main_conditional;
    t.theta = in.number(target["theta"], path + ".theta");
    t.alpha = in.number(target["alpha"], path + ".alpha");
    if (!(t.theta > 0.0 && t.theta < 0.5)) in.fail(path + ".theta", "theta must lie in (0, 1/2)");
    if (!(t.alpha > 0.5 && t.alpha <= 1.0)) in.fail(path + ".alpha", "alpha must lie in (1/2, 1]");
  } else if (law == "point-mass") {
    in.allow_keys(target, path, {"law", "at"});
    t.kind = K::point_mass;
    t.at = in.number(target["at"], path + ".at");
  } else if (!law.empty()) {
    in.fail(path + ".law", "unknown target law '" + law +
                               "' (expected none, gamma, exponential, unit-uniform, "
                               "shifted-uniform, main, main-conditional or point-mass)");
  }
  if (t.kind == K::shifted_uniform && t.c.is_infinite()) {
    in.fail(path + ".c", "the shifted uniform law needs a finite c");
  }
  if (t.kind == K::main && t.c.is_infinite()) {
    in.fail(path + ".c", "c = infinite has no unconditional law; use main-conditional");
  }
}

void decode(Reader& in, const YAML::Node& root, ExperimentConfig& cfg) {
  in.allow_keys(root, "",
                {"schema_version", "experiment", "seed", "replications", "horizons", "workers", "cycles",
                 "cycle_cap", "max_truncated_fraction", "c_regime", "tail_range", "process",
                 "down_period", "tolerances", "custom", "output"});

  cfg.seed = static_cast<std::uint64_t>(in.scalar<std::uint64_t>(root["seed"], "seed", "a nonnegative integer").value_or(0));
  cfg.replications = in.integer(root["replications"], "replications", 1);
  cfg.workers = static_cast<int>(in.integer(root["workers"], "workers", 1));
  cfg.cycles = in.integer(root["cycles"], "cycles", 1);
  cfg.cycle_cap = in.integer(root["cycle_cap"], "cycle_cap", kDefaultCycleCap);
  cfg.max_truncated_fraction = in.number(root["max_truncated_fraction"], "max_truncated_fraction");
  cfg.c = in.tail_ratio(root["c_regime"], "c_regime");

  cfg.horizons.clear();
  const auto horizons = root["horizons"];
  if (horizons && horizons.IsSequence()) {
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      cfg.horizons.push_back(in.integer(horizons[i], "horizons[" + std::to_string(i) + "]"));
    }
  } else {
    in.fail("horizons", "expected a list of integers");
  }

  const auto range = in.numbers(root["tail_range"], "tail_range");
  if (range.size() == 2) {
    cfg.tail_range = {range[0], range[1]};
  } else if (root["tail_range"] && root["tail_range"].IsSequence()) {
    in.fail("tail_range", "expected [low, high]");
  }

  const auto process = root["process"];
  if (!process || !process.IsMap()) {
    in.fail("process", "expected a map");
  } else {
    in.allow_keys(process, "process", {"initial", "offspring", "migration"});
    cfg.process.initial = in.integer(process["initial"], "process.initial");
    cfg.process.offspring = in.offspring(process["offspring"], "process.offspring");
    const auto m = process["migration"];
    if (!m || !m.IsMap()) {
      in.fail("process.migration", "expected a map");
    } else {
      const std::string path = "process.migration";
      in.allow_keys(m, path,
                    {"p", "q", "r", "immigration_plus", "immigration_zero", "family_emigration",
                     "individual_emigration"});
      auto& mig = cfg.process.migration;
      mig.p = in.number(m["p"], path + ".p");
      mig.q = in.number(m["q"], path + ".q");
      mig.r = in.number(m["r"], path + ".r");
      const auto law_or_zero = [&](const char* key) {
        return m[key] ? in.integer_law(m[key], path + "." + key) : IntegerLaw::constant(0);
      };
      mig.immigration_plus = law_or_zero("immigration_plus");
      mig.immigration_zero = law_or_zero("immigration_zero");
      mig.fam_emigration = law_or_zero("family_emigration");
      mig.ind_emigration = law_or_zero("individual_emigration");
    }
  }

  cfg.down = in.down_period(root["down_period"], "down_period");

  const auto tol = root["tolerances"];
  if (!tol || !tol.IsMap()) {
    in.fail("tolerances", "expected a map");
  } else {
    in.allow_keys(tol, "tolerances", {"ks", "mean", "tail_exponent", "atom", "stationary"});
    cfg.tolerances.ks = in.number(tol["ks"], "tolerances.ks");
    cfg.tolerances.mean = in.number(tol["mean"], "tolerances.mean");
    cfg.tolerances.tail_exponent = in.number(tol["tail_exponent"], "tolerances.tail_exponent");
    cfg.tolerances.atom = in.number(tol["atom"], "tolerances.atom");
    cfg.tolerances.stationary = in.number(tol["stationary"], "tolerances.stationary");
  }

  if (cfg.experiment == ExperimentKind::custom) {
    decode_custom(in, root["custom"], cfg.custom);
  } else if (root["custom"]) {
    in.fail("custom", "only the custom experiment takes a custom section");
  }

  const auto out = root["output"];
  if (!out || !out.IsMap()) {
    in.fail("output", "expected a map");
  } else {
    in.allow_keys(out, "output", {"directory", "formats", "trajectory"});
    cfg.output.directory = in.text(out["directory"], "output.directory");
    cfg.output.formats.clear();
    const auto formats = out["formats"];
    if (formats && formats.IsSequence()) {
      for (std::size_t i = 0; i < formats.size(); ++i) {
        const auto name = in.text(formats[i], "output.formats[" + std::to_string(i) + "]");
        if (auto f = output_format_from_string(name)) {
          cfg.output.formats.push_back(*f);
        } else if (!name.empty()) {
          in.fail("output.formats", "unknown format '" + name + "' (expected json, csv or plot-data)");
        }
      }
    } else {
      in.fail("output.formats", "expected a list");
    }
    if (out["trajectory"]) cfg.output.trajectory = in.integer(out["trajectory"], "output.trajectory");
  }
}

bool is_heavy(const DownPeriodLaw& law) { return law.kind() == DownPeriodKind::heavy_tail; }

void check_c_regime(const ExperimentConfig& cfg, std::vector<std::string>& out) {
  DownPeriodLaw down = DownPeriodLaw::deterministic(1);
  try {
    down = cfg.down_law();
  } catch (const LawError&) {
    return;  // reported by the process checks
  }
  const double beta = cfg.up_tail_exponent();
  const auto& c = cfg.c;
  if (!is_heavy(down)) {
    if (c.is_infinite() || c.value() != 0.0) {
      out.emplace_back("c_regime: E T_d < infinity forces c = 0, but c = " + c.describe() + " was declared");
    }
    return;
  }
  const double alpha = down.alpha();
  std::ostringstream tails;
  tails << "alpha = " << alpha << ", beta = " << beta;
  if (alpha > beta + kExponentTolerance) {
    if (c.is_infinite() || c.value() != 0.0) {
      out.emplace_back("c_regime: alpha > beta forces c = 0 (" + tails.str() + "), but c = " +
                       c.describe() + " was declared");
    }
  } else if (alpha < beta - kExponentTolerance) {
    if (!c.is_infinite()) {
      out.emplace_back("c_regime: alpha < beta forces c = infinite (" + tails.str() + "), but c = " +
                       c.describe() + " was declared");
    }
  } else if (c.is_infinite()) {
    out.emplace_back("c_regime: alpha = beta admits only a finite c (" + tails.str() + ")");
  }
}

std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

nlohmann::ordered_json law_json(const IntegerLaw& law) {
  nlohmann::ordered_json j;
  switch (law.kind()) {
    case IntegerLawKind::constant: j["kind"] = "constant"; j["value"] = law.value(); break;
    case IntegerLawKind::poisson: j["kind"] = "poisson"; j["mean"] = law.rate(); break;
    case IntegerLawKind::tabulated: j["kind"] = "tabulated"; j["pmf"] = law.pmf(); break;
    case IntegerLawKind::heavy_tail:
      j["kind"] = "heavy-tail";
      j["exponent"] = law.exponent();
      j["scale"] = law.scale();
      break;
  }
  return j;
}

nlohmann::ordered_json tail_ratio_json(const TailRatio& c) {
  if (c.is_infinite()) return "infinite";
  return c.value();
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& e : kExperiments) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

std::optional<ExperimentKind> experiment_from_string(std::string_view name) {
  for (const auto& e : kExperiments) {
    if (name == e.name) return e.kind;
  }
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& e : kExperiments) v.push_back(e.kind);
    return v;
  }();
  return kinds;
}

std::string experiment_summary(ExperimentKind kind) {
  for (const auto& e : kExperiments) {
    if (e.kind == kind) return e.summary;
  }
  return "";
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::plot_data: return "plot-data";
  }
  return "unknown";
}

std::optional<OutputFormat> output_format_from_string(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "plot-data") return OutputFormat::plot_data;
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

DownPeriodLaw ExperimentConfig::down_law() const {
  return down ? *down : native_down_period(process.migration);
}

RegenerativeConfig ExperimentConfig::regenerative() const {
  RegenerativeConfig regen;
  regen.process = process;
  regen.down = down_law();
  regen.horizon = horizons.empty() ? 1 : horizons.back();
  regen.cycle_cap = cycle_cap;
  return regen;
}

double ExperimentConfig::up_tail_exponent() const {
  const double theta = process.theta();
  const auto& zero = process.migration.immigration_zero;
  if (zero.kind() == IntegerLawKind::heavy_tail && theta + zero.exponent() < 1.0) {
    return zero.exponent();
  }
  return std::max(1.0 - theta, 0.0);
}

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> out;
  if (schema_version != kConfigSchemaVersion) {
    out.push_back("schema_version: unsupported version " + std::to_string(schema_version) +
                  " (this build reads " + std::to_string(kConfigSchemaVersion) + ")");
  }
  if (replications < 1) out.emplace_back("replications: must be >= 1");
  if (cycles < 1) out.emplace_back("cycles: must be >= 1");
  if (workers < 0) out.emplace_back("workers: must be >= 0 (0 means all cores)");
  if (horizons.empty()) out.emplace_back("horizons: must be nonempty");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1) out.push_back("horizons: entries must be >= 1");
    if (i > 0 && horizons[i] <= horizons[i - 1]) {
      out.emplace_back("horizons: must be strictly increasing");
      break;
    }
  }
  if (!horizons.empty() && cycle_cap < horizons.back()) {
    out.emplace_back("cycle_cap: must be at least the largest horizon");
  }
  if (!(max_truncated_fraction >= 0.0 && max_truncated_fraction <= 1.0)) {
    out.emplace_back("max_truncated_fraction: must lie in [0, 1]");
  }
  if (!(tail_range.first > 0.0 && tail_range.second > tail_range.first)) {
    out.emplace_back("tail_range: need 0 < low < high");
  }
  for (auto [name, v] : {std::pair{"ks", tolerances.ks}, std::pair{"mean", tolerances.mean},
                         std::pair{"tail_exponent", tolerances.tail_exponent},
                         std::pair{"atom", tolerances.atom}, std::pair{"stationary", tolerances.stationary}}) {
    if (!(v > 0.0)) out.push_back(std::string("tolerances.") + name + ": must be positive");
  }
  if (output.trajectory && (*output.trajectory < 0 || *output.trajectory >= replications)) {
    out.emplace_back("output.trajectory: replication index out of range");
  }
  if (output.directory.empty()) out.emplace_back("output.directory: must be nonempty");

  const auto process_problems = process.migration.violations(process.b());
  for (const auto& p : process_problems) out.push_back("process." + p);
  if (process.initial < 0) out.emplace_back("process.initial: must be nonnegative");
  if (!process_problems.empty()) return out;

  const bool needs_cycles_to_start = experiment != ExperimentKind::theorem_old_I &&
                                     experiment != ExperimentKind::theorem_old_II;
  if (!(process.migration.immigration_zero.prob_positive() > 0.0) && needs_cycles_to_start) {
    out.emplace_back("process.migration.immigration_zero: must be positive with positive probability");
    return out;
  }
  if (!down && !(process.migration.r * process.migration.immigration_zero.prob_positive() > 0.0) &&
      experiment != ExperimentKind::cycle_lifetime && experiment != ExperimentKind::theorem_rho_cycle &&
      !(experiment == ExperimentKind::custom && custom.generator != CustomGenerator::regenerative)) {
    out.emplace_back("down_period: native stays at zero need r * P(I^o > 0) > 0");
    return out;
  }

  const double theta = process.theta();
  const auto th = format_number(theta);
  const auto& zero = process.migration.immigration_zero;
  const bool heavy_zero = zero.kind() == IntegerLawKind::heavy_tail;
  const auto require_rho = [&](const char* what) {
    if (!heavy_zero) {
      out.push_back(std::string(what) + " needs heavy-tailed immigration at zero");
      return;
    }
    const double rho = zero.exponent();
    if (!(rho > 0.5 && rho < 1.0)) out.push_back(std::string(what) + " needs rho in (1/2, 1)");
    if (!(theta + rho < 1.0)) {
      out.push_back(std::string(what) + " needs theta + rho < 1 (theta = " + th +
                    ", rho = " + format_number(rho) + ")");
    }
  };

  switch (experiment) {
    case ExperimentKind::theorem_old_I:
      if (!(theta > 0.0)) out.push_back("theorem-old-I needs theta > 0, got theta = " + th);
      break;
    case ExperimentKind::theorem_old_II:
      if (std::abs(theta) > kThetaZeroTolerance) out.push_back("theorem-old-II needs theta = 0, got theta = " + th);
      break;
    case ExperimentKind::theorem_old_III:
      if (!(theta < 0.0)) out.push_back("theorem-old-III needs theta < 0, got theta = " + th);
      if (down) out.emplace_back("theorem-old-III concerns the chain itself; down_period must be native");
      break;
    case ExperimentKind::cycle_lifetime:
      if (!(theta < 1.0)) out.push_back("cycle-lifetime needs theta < 1 so cycles end, got theta = " + th);
      break;
    case ExperimentKind::theorem_main_Ia:
      if (!(theta > 0.0 && theta < 0.5)) {
        out.push_back("theorem-main-Ia needs theta in (0, 1/2), got theta = " + th);
      }
      if (heavy_zero && theta + zero.exponent() < 1.0) {
        out.emplace_back("theorem-main-Ia needs theta + rho >= 1 for heavy immigration at zero");
      }
      if (c.is_infinite()) out.emplace_back("theorem-main-Ia needs a finite c; use theorem-main-Ib for c = infinite");
      check_c_regime(*this, out);
      break;
    case ExperimentKind::theorem_main_Ib:
      if (!(theta > 0.0 && theta < 0.5)) {
        out.push_back("theorem-main-Ib needs theta in (0, 1/2), got theta = " + th);
      }
      if (heavy_zero && theta + zero.exponent() < 1.0) {
        out.emplace_back("theorem-main-Ib needs theta + rho >= 1 for heavy immigration at zero");
      }
      if (!c.is_infinite()) out.emplace_back("theorem-main-Ib needs c = infinite; use theorem-main-Ia for finite c");
      check_c_regime(*this, out);
      break;
    case ExperimentKind::theorem_main_II:
      if (std::abs(theta) > kThetaZeroTolerance) out.push_back("theorem-main-II needs theta = 0, got theta = " + th);
      check_c_regime(*this, out);
      break;
    case ExperimentKind::theorem_main_III:
      if (!(theta < 0.0)) out.push_back("theorem-main-III needs theta < 0, got theta = " + th);
      break;
    case ExperimentKind::theorem_rho_cycle:
      require_rho("theorem-rho-cycle");
      break;
    case ExperimentKind::theorem_rho_II:
      require_rho("theorem-rho-II");
      if (!(theta < 0.5)) out.push_back("theorem-rho-II needs theta < 1/2, got theta = " + th);
      check_c_regime(*this, out);
      break;
    case ExperimentKind::custom:
      if (custom.transform == MarginalTransform::log_over_log_t && horizons.front() <= 1) {
        out.emplace_back("custom: log-over-log-t needs horizons > 1");
      }
      break;
  }
  return out;
}

std::string default_config_text(ExperimentKind kind) {
  const auto specific = YAML::Load("experiment: " + to_string(kind) + "\n" + specific_defaults(kind));
  YAML::Emitter out;
  out << merge(YAML::Load(kCommonDefaults), specific);
  return std::string(out.c_str()) + "\n";
}

ExperimentConfig default_config(ExperimentKind kind) {
  return parse_config("schema_version: 1\nexperiment: " + to_string(kind) + "\n");
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node user;
  try {
    user = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("yaml: ") + e.what()});
  }
  if (!user.IsMap()) throw ConfigError({"config: expected a YAML map at the top level"});

  Reader in;
  ExperimentConfig cfg;
  const auto version = user["schema_version"];
  if (!version) {
    throw ConfigError({"schema_version: missing (this build reads version " +
                       std::to_string(kConfigSchemaVersion) + ")"});
  }
  cfg.schema_version = static_cast<int>(in.integer(version, "schema_version"));
  if (!in.errors.empty()) throw ConfigError(in.errors);
  if (cfg.schema_version != kConfigSchemaVersion) throw ConfigError(cfg.violations());

  const auto name = in.text(user["experiment"], "experiment");
  const auto kind = experiment_from_string(name);
  if (!kind) {
    std::string names;
    for (const auto& e : kExperiments) names += std::string(names.empty() ? "" : ", ") + e.name;
    throw ConfigError({in.errors.empty() ? "experiment: unknown experiment '" + name + "' (expected one of " + names + ")"
                                         : in.errors.front()});
  }
  cfg.experiment = *kind;

  const YAML::Node merged = merge(YAML::Load(default_config_text(*kind)), user);
  decode(in, merged, cfg);
  auto problems = std::move(in.errors);
  if (problems.empty()) {
    for (auto& v : cfg.violations()) problems.push_back(std::move(v));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

std::string canonical_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema_version"] = cfg.schema_version;
  j["experiment"] = to_string(cfg.experiment);
  j["seed"] = cfg.seed;
  j["replications"] = cfg.replications;
  j["horizons"] = cfg.horizons;
  j["cycles"] = cfg.cycles;
  j["cycle_cap"] = cfg.cycle_cap;
  j["max_truncated_fraction"] = cfg.max_truncated_fraction;
  j["c_regime"] = tail_ratio_json(cfg.c);
  j["tail_range"] = {cfg.tail_range.first, cfg.tail_range.second};

  auto& p = j["process"];
  p["initial"] = cfg.process.initial;
  p["offspring"] = {{"kind", cfg.process.offspring.describe()}, {"pmf", cfg.process.offspring.pmf()}};
  const auto& m = cfg.process.migration;
  p["migration"] = {{"p", m.p},
                    {"q", m.q},
                    {"r", m.r},
                    {"immigration_plus", law_json(m.immigration_plus)},
                    {"immigration_zero", law_json(m.immigration_zero)},
                    {"family_emigration", law_json(m.fam_emigration)},
                    {"individual_emigration", law_json(m.ind_emigration)}};

  auto& d = j["down_period"];
  if (!cfg.down) {
    d["kind"] = "native";
  } else {
    switch (cfg.down->kind()) {
      case DownPeriodKind::geometric:
        d["kind"] = "geometric";
        d["success_probability"] = cfg.down->success_probability();
        break;
      case DownPeriodKind::heavy_tail:
        d["kind"] = "heavy-tail";
        d["alpha"] = cfg.down->alpha();
        d["scale"] = cfg.down->scale();
        break;
      case DownPeriodKind::deterministic:
        d["kind"] = "deterministic";
        d["duration"] = cfg.down->duration();
        break;
    }
  }
  j["tolerances"] = {{"ks", cfg.tolerances.ks},
                     {"mean", cfg.tolerances.mean},
                     {"tail_exponent", cfg.tolerances.tail_exponent},
                     {"atom", cfg.tolerances.atom},
                     {"stationary", cfg.tolerances.stationary}};
  if (cfg.experiment == ExperimentKind::custom) {
    const auto& c = cfg.custom;
    j["custom"] = {{"generator", static_cast<int>(c.generator)},
                   {"transform", to_string(c.transform)},
                   {"condition_on_positive", c.condition_on_positive},
                   {"target",
                    {{"kind", static_cast<int>(c.target.kind)},
                     {"theta", c.target.theta},
                     {"alpha", c.target.alpha},
                     {"at", c.target.at},
                     {"c", tail_ratio_json(c.target.c)}}}};
  }
  return j.dump();
}

std::string config_digest(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace branchregen
