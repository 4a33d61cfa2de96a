// Command line front end: run, validate and list the named experiments.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "branchregen/experiment_config.hpp"
#include "branchregen/experiments.hpp"
#include "branchregen/outputs.hpp"

namespace br = branchregen;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

struct Options {
  std::string config_path;
  std::string experiment;
  std::uint64_t seed = 0;
  std::int64_t replications = 0;
  std::vector<std::int64_t> horizons;
  std::string out;
  int workers = 0;
  std::vector<std::string> formats;
  std::int64_t trajectory = -1;
  bool quiet = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw br::ConfigError({"cannot read config file " + path});
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void print_violations(const std::vector<std::string>& violations) {
  std::cerr << "invalid config:\n";
  for (const auto& v : violations) std::cerr << "  - " << v << '\n';
}

// The config text, either read from --config or the defaults of --experiment.
std::string config_text(const Options& o) {
  if (!o.config_path.empty()) return read_file(o.config_path);
  const auto kind = br::experiment_from_string(o.experiment);
  if (!kind) throw br::ConfigError({"unknown experiment '" + o.experiment + "'"});
  return br::default_config_text(*kind);
}

// Command line flags take precedence over the file. The result is checked
// again since an override can leave the valid regime.
br::ExperimentConfig load(const Options& o, const CLI::App& cmd) {
  auto cfg = br::parse_config(config_text(o));
  if (cmd.count("--seed")) cfg.seed = o.seed;
  if (cmd.count("--replications")) cfg.replications = o.replications;
  if (cmd.count("--horizon")) cfg.horizons = o.horizons;
  if (cmd.count("--workers")) cfg.workers = o.workers;
  if (cmd.count("--out")) cfg.output.directory = o.out;
  if (cmd.count("--format")) {
    cfg.output.formats.clear();
    std::vector<std::string> bad;
    for (const auto& name : o.formats) {
      if (const auto f = br::output_format_from_string(name)) {
        cfg.output.formats.push_back(*f);
      } else {
        bad.push_back("unknown output format '" + name + "' (expected json, csv or plot-data)");
      }
    }
    if (!bad.empty()) throw br::ConfigError(bad);
  }
  if (cmd.count("--trajectory")) cfg.output.trajectory = o.trajectory;
  if (const auto v = cfg.violations(); !v.empty()) throw br::ConfigError(v);
  return cfg;
}

void print_summary(const br::ResultRecord& r, std::ostream& out) {
  out << r.experiment << "  digest " << r.config_digest << "  seed " << r.seed << "  replications "
      << r.replications << "  theta " << r.theta << "  b " << r.b << '\n';
  for (std::size_t h = 0; h < r.horizons.size(); ++h) {
    out << "  t=" << std::setw(8) << r.horizons[h];
    if (h < r.ks.size()) out << "  ks=" << std::setprecision(4) << r.ks[h];
    out << "  surviving=" << r.survival_fractions[h] << "  mean=" << r.sample_means[h] << '\n';
  }
  for (const auto& t : r.tail_estimates) {
    out << "  tail " << t.name << " (" << t.method << "): " << t.exponent << " +- " << t.standard_error << '\n';
  }
  for (const auto& c : r.checks) {
    out << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": observed " << c.observed << ", expected "
        << c.expected << " +- " << c.tolerance;
    if (!c.detail.empty()) out << "  (" << c.detail << ')';
    out << '\n';
  }
  out << "  " << std::setprecision(3) << r.wall_seconds << " s, " << (r.all_passed() ? "all checks passed" : "FAILED")
      << '\n';
}

int cmd_run(const Options& o, const CLI::App& cmd) {
  const auto cfg = load(o, cmd);
  const auto record = br::run_experiment(cfg);
  const auto written = br::emit_outputs(record, cfg.output.formats, cfg.output.directory);
  if (cfg.output.trajectory) {
    const auto path = std::filesystem::path(cfg.output.directory) /
                      ("trajectory-" + std::to_string(*cfg.output.trajectory) + ".csv");
    br::write_file_atomic(path, br::trajectory_csv(br::replication_trajectory(cfg, *cfg.output.trajectory)));
  }
  if (!o.quiet) {
    print_summary(record, std::cout);
    for (const auto& p : written) std::cout << "  wrote " << p.string() << '\n';
  }
  return record.all_passed() ? kExitPass : kExitCheckFailed;
}

int cmd_validate(const Options& o, const CLI::App& cmd) {
  const auto cfg = load(o, cmd);
  std::cout << "ok: " << br::to_string(cfg.experiment) << ", digest " << br::config_digest(cfg) << '\n';
  return kExitPass;
}

int cmd_list() {
  for (const auto kind : br::all_experiments()) {
    std::cout << std::left << std::setw(20) << br::to_string(kind) << br::experiment_summary(kind) << '\n';
  }
  return kExitPass;
}

void add_config_flags(CLI::App& cmd, Options& o) {
  auto* config = cmd.add_option("--config", o.config_path, "YAML experiment config")->check(CLI::ExistingFile);
  cmd.add_option("--experiment", o.experiment, "run the defaults of a named experiment")->excludes(config);
  cmd.add_option("--seed", o.seed, "master seed");
  cmd.add_option("--replications", o.replications, "number of replications");
  cmd.add_option("--horizon", o.horizons, "observation time (repeatable)")->take_all();
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--workers", o.workers, "worker threads; results do not depend on it");
  cmd.add_option("--format", o.formats, "json, csv or plot-data (repeatable)")->delimiter(',');
  cmd.add_option("--trajectory", o.trajectory, "also dump the path of this replication as t,value CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical branching processes with migration in alternating regenerative environments"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "run an experiment and write its outputs");
  add_config_flags(*run, o);
  run->add_flag("-q,--quiet", o.quiet, "no summary on stdout");
  auto* validate = app.add_subcommand("validate", "check a config and list every violation");
  add_config_flags(*validate, o);
  auto* list = app.add_subcommand("list-experiments", "list the named experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  for (auto* cmd : {run, validate}) {
    if (cmd->parsed() && o.config_path.empty() && o.experiment.empty()) {
      std::cerr << "one of --config or --experiment is required\n";
      return kExitConfigError;
    }
  }

  try {
    if (run->parsed()) return cmd_run(o, *run);
    if (validate->parsed()) return cmd_validate(o, *validate);
    if (list->parsed()) return cmd_list();
  } catch (const br::ConfigError& e) {
    print_violations(e.violations());
    return kExitConfigError;
  } catch (const br::ExperimentAborted& e) {
    std::cerr << "experiment aborted: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitPass;
}
