#include "branchregen/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace branchregen {
namespace {

using ojson = nlohmann::ordered_json;

// NaN and infinities are written as null and read back as NaN.
ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

double read_number(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

ojson numbers(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> read_numbers(const nlohmann::json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(read_number(x));
  return out;
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string to_json(const ResultRecord& r, bool include_timing) {
  ojson j;
  j["schema_version"] = r.schema_version;
  j["experiment"] = r.experiment;
  j["config_digest"] = r.config_digest;
  j["seed"] = r.seed;
  j["replications"] = r.replications;
  j["theta"] = number(r.theta);
  j["b"] = number(r.b);
  j["recurrence"] = r.recurrence;
  j["c_regime"] = r.c_regime;
  j["target_law"] = r.target_law;
  j["transform"] = r.transform;
  j["conditional"] = r.conditional;
  j["horizons"] = r.horizons;
  j["ks"] = numbers(r.ks);
  j["survival_fractions"] = numbers(r.survival_fractions);
  j["sample_counts"] = r.sample_counts;
  j["sample_means"] = numbers(r.sample_means);

  ojson tails = ojson::array();
  for (const auto& t : r.tail_estimates) {
    tails.push_back({{"name", t.name},
                     {"method", t.method},
                     {"exponent", number(t.exponent)},
                     {"standard_error", number(t.standard_error)},
                     {"range_low", number(t.range_low)},
                     {"range_high", number(t.range_high)},
                     {"sample_count", t.sample_count},
                     {"power_tail", t.power_tail}});
  }
  j["tail_estimates"] = tails;

  ojson refs = ojson::array();
  for (const auto& v : r.references) refs.push_back({{"name", v.name}, {"value", number(v.value)}});
  j["references"] = refs;

  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"observed", number(c.observed)},
                      {"expected", number(c.expected)},
                      {"tolerance", number(c.tolerance)},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["all_passed"] = r.all_passed();
  j["truncated_cycles"] = r.truncated_cycles;
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

ResultRecord result_record_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ResultRecord r;
  j.at("schema_version").get_to(r.schema_version);
  j.at("experiment").get_to(r.experiment);
  j.at("config_digest").get_to(r.config_digest);
  j.at("seed").get_to(r.seed);
  j.at("replications").get_to(r.replications);
  r.theta = read_number(j.at("theta"));
  r.b = read_number(j.at("b"));
  j.at("recurrence").get_to(r.recurrence);
  j.at("c_regime").get_to(r.c_regime);
  j.at("target_law").get_to(r.target_law);
  j.at("transform").get_to(r.transform);
  j.at("conditional").get_to(r.conditional);
  j.at("horizons").get_to(r.horizons);
  r.ks = read_numbers(j.at("ks"));
  r.survival_fractions = read_numbers(j.at("survival_fractions"));
  j.at("sample_counts").get_to(r.sample_counts);
  r.sample_means = read_numbers(j.at("sample_means"));
  for (const auto& t : j.at("tail_estimates")) {
    TailEstimateRecord e;
    t.at("name").get_to(e.name);
    t.at("method").get_to(e.method);
    e.exponent = read_number(t.at("exponent"));
    e.standard_error = read_number(t.at("standard_error"));
    e.range_low = read_number(t.at("range_low"));
    e.range_high = read_number(t.at("range_high"));
    t.at("sample_count").get_to(e.sample_count);
    t.at("power_tail").get_to(e.power_tail);
    r.tail_estimates.push_back(std::move(e));
  }
  for (const auto& v : j.at("references")) {
    r.references.push_back({v.at("name").get<std::string>(), read_number(v.at("value"))});
  }
  for (const auto& c : j.at("checks")) {
    CheckOutcome o;
    c.at("name").get_to(o.name);
    o.observed = read_number(c.at("observed"));
    o.expected = read_number(c.at("expected"));
    o.tolerance = read_number(c.at("tolerance"));
    c.at("passed").get_to(o.passed);
    c.at("detail").get_to(o.detail);
    r.checks.push_back(std::move(o));
  }
  j.at("truncated_cycles").get_to(r.truncated_cycles);
  if (j.contains("wall_seconds")) j.at("wall_seconds").get_to(r.wall_seconds);
  return r;
}

std::string to_csv(const ResultRecord& r) {
  std::ostringstream out;
  out << "horizon,ks,survival_fraction,sample_count,sample_mean\n";
  for (std::size_t h = 0; h < r.horizons.size(); ++h) {
    out << r.horizons[h] << ',' << (h < r.ks.size() ? csv_number(r.ks[h]) : "") << ','
        << csv_number(r.survival_fractions.at(h)) << ',' << r.sample_counts.at(h) << ','
        << csv_number(r.sample_means.at(h)) << '\n';
  }
  return out.str();
}

std::string plot_data_csv(const ResultRecord& r, int points) {
  if (points < 2) throw std::invalid_argument("plot data needs at least 2 points");
  std::ostringstream out;
  out << "horizon,x,empirical_cdf,analytic_cdf\n";
  for (std::size_t h = 0; h < r.marginals.size() && h < r.horizons.size(); ++h) {
    const auto& d = r.marginals[h];
    if (d.empty()) continue;
    const auto& s = d.samples();
    const auto quantile = [&](double p) {
      const auto i = static_cast<std::size_t>(p * static_cast<double>(s.size() - 1));
      return s[i];
    };
    double lo = quantile(0.001);
    double hi = quantile(0.999);
    if (!(hi > lo)) {
      lo = s.front() - 0.5;
      hi = s.back() + 0.5;
    }
    for (int i = 0; i < points; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
      out << r.horizons[h] << ',' << csv_number(x) << ',' << csv_number(d.ecdf(x)) << ','
          << (r.reference_cdf ? csv_number(r.reference_cdf(x)) : "") << '\n';
    }
  }
  return out.str();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream out;
  out << "t,value\n";
  for (std::size_t t = 0; t < trajectory.size(); ++t) out << t << ',' << trajectory[t] << '\n';
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::vector<std::filesystem::path> emit_outputs(const ResultRecord& record, std::span<const OutputFormat> formats,
                                                const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + directory.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto f : formats) {
    std::filesystem::path path;
    std::string content;
    switch (f) {
      case OutputFormat::json:
        path = directory / "result.json";
        content = to_json(record);
        break;
      case OutputFormat::csv:
        path = directory / "result.csv";
        content = to_csv(record);
        break;
      case OutputFormat::plot_data:
        path = directory / "plot-data.csv";
        content = plot_data_csv(record);
        break;
    }
    write_file_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace branchregen
