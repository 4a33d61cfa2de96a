#include "branchregen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace branchregen {
namespace {

struct LineFit {
  double slope = 0.0;
  double slope_se = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - my - fit.slope * (x[i] - mx);
    rss += r * r;
  }
  fit.slope_se = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

// Empirical survival at log-spaced points of [lo, hi]; points with no
// exceedances are dropped.
LineFit survival_fit(const std::vector<double>& sorted, double lo, double hi, int points) {
  std::vector<double> lx;
  std::vector<double> ly;
  const auto n = static_cast<double>(sorted.size());
  for (int i = 0; i < points; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const auto above = static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
    if (above <= 0.0) continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(above / n));
  }
  if (lx.size() < 3) throw std::invalid_argument("tail estimate: too few exceedances in the window");
  return least_squares(lx, ly);
}

double apply_transform(std::int64_t v, std::int64_t t, MarginalTransform transform, double b) {
  switch (transform) {
    case MarginalTransform::identity: return static_cast<double>(v);
    case MarginalTransform::divide_by_bt: return static_cast<double>(v) / (b * static_cast<double>(t));
    case MarginalTransform::log_over_log_t:
      return std::log(static_cast<double>(v)) / std::log(static_cast<double>(t));
  }
  return 0.0;
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
  if (samples_.empty()) return 0.0;
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::ecdf_left(double x) const {
  if (samples_.empty()) return 0.0;
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::mean() const {
  if (samples_.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

double ks_distance(const EmpiricalDistribution& empirical, const LimitLaw& law) {
  if (empirical.empty()) throw std::invalid_argument("ks_distance: empty sample");
  const auto& s = empirical.samples();
  const auto n = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double below = static_cast<double>(i) / n;  // F_n(v-)
    const double at = static_cast<double>(j) / n;     // F_n(v)
    d = std::max({d, std::abs(at - law.cdf(s[i])), std::abs(below - law.cdf_left(s[i]))});
    i = j;
  }
  return d;
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  const auto& x = a.samples();
  const auto& y = b.samples();
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

TailEstimate tail_exponent_estimate(std::span<const double> samples, TailMethod method,
                                    const TailOptions& options) {
  if (samples.size() < 1000) {
    throw std::invalid_argument("tail estimate: need at least 1000 samples, got " +
                                std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() > 0.0)) throw std::invalid_argument("tail estimate: samples must be positive");

  TailEstimate est;
  est.method = method;
  est.sample_count = sorted.size();

  if (method == TailMethod::hill) {
    const auto k = std::max<std::size_t>(
        10, static_cast<std::size_t>(options.hill_fraction * static_cast<double>(sorted.size())));
    const double threshold = sorted[sorted.size() - 1 - k];
    double sum = 0.0;
    for (std::size_t i = sorted.size() - k; i < sorted.size(); ++i) sum += std::log(sorted[i] / threshold);
    est.exponent = static_cast<double>(k) / sum;
    est.standard_error = est.exponent / std::sqrt(static_cast<double>(k));
    est.range_low = threshold;
    est.range_high = sorted.back();
    return est;
  }

  double lo;
  double hi;
  if (options.range) {
    std::tie(lo, hi) = *options.range;
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("tail estimate: invalid regression window");
  } else {
    hi = sorted[sorted.size() - 100];
    lo = hi / 10.0;
  }
  const LineFit whole = survival_fit(sorted, lo, hi, 21);
  est.exponent = -whole.slope;
  est.standard_error = whole.slope_se;
  est.range_low = lo;
  est.range_high = hi;
  const double mid = std::sqrt(lo * hi);
  const LineFit lower = survival_fit(sorted, lo, mid, 11);
  const LineFit upper = survival_fit(sorted, mid, hi, 11);
  const double scale = std::max(std::abs(lower.slope), std::abs(upper.slope));
  est.power_tail = scale == 0.0 || std::abs(upper.slope - lower.slope) <= 0.25 * scale;
  return est;
}

double compute_theta(const MigrationParams& params, double b) { return params.theta(b); }

Recurrence classify_recurrence(double theta) {
  if (theta > 1.0) return Recurrence::non_recurrent;
  if (theta == 1.0) return Recurrence::boundary;
  if (theta >= 0.0) return Recurrence::null_recurrent;
  return Recurrence::positive_recurrent;
}

std::string to_string(Recurrence r) {
  switch (r) {
    case Recurrence::non_recurrent: return "non-recurrent";
    case Recurrence::null_recurrent: return "null-recurrent";
    case Recurrence::positive_recurrent: return "positive-recurrent";
    case Recurrence::boundary: return "boundary";
  }
  return "unknown";
}

std::string to_string(MarginalTransform t) {
  switch (t) {
    case MarginalTransform::identity: return "identity";
    case MarginalTransform::divide_by_bt: return "divide-by-bt";
    case MarginalTransform::log_over_log_t: return "log-over-log-t";
  }
  return "unknown";
}

MarginalTransform marginal_transform_from_string(const std::string& name) {
  if (name == "identity") return MarginalTransform::identity;
  if (name == "divide-by-bt") return MarginalTransform::divide_by_bt;
  if (name == "log-over-log-t") return MarginalTransform::log_over_log_t;
  throw std::invalid_argument("unknown transform '" + name +
                              "' (expected identity, divide-by-bt or log-over-log-t)");
}

MarginalSample marginal_at(std::span<const std::int64_t> values_at_t, std::int64_t t,
                           MarginalTransform transform, bool condition_on_positive, double b) {
  if (transform == MarginalTransform::divide_by_bt && !(b > 0.0 && t > 0)) {
    throw std::invalid_argument("marginal_at: divide-by-bt needs b > 0 and t > 0");
  }
  if (transform == MarginalTransform::log_over_log_t && t <= 1) {
    throw std::invalid_argument("marginal_at: log-over-log-t needs t > 1");
  }
  MarginalSample out;
  out.total = values_at_t.size();
  std::vector<double> kept;
  kept.reserve(values_at_t.size());
  for (const auto v : values_at_t) {
    if (v <= 0) {
      ++out.zero_count;
      if (condition_on_positive || transform == MarginalTransform::log_over_log_t) continue;
    }
    kept.push_back(apply_transform(v, t, transform, b));
  }
  if (out.total > 0) {
    out.survival_fraction =
        static_cast<double>(out.total - out.zero_count) / static_cast<double>(out.total);
  }
  if (condition_on_positive && out.zero_count == out.total) {
    throw std::invalid_argument("marginal_at: every value is zero at t = " + std::to_string(t) +
                                "; cannot condition on survival");
  }
  out.distribution = EmpiricalDistribution(std::move(kept));
  return out;
}

MarginalSample marginal_at(std::span<const Trajectory> trajectories, std::int64_t t,
                           MarginalTransform transform, bool condition_on_positive, double b) {
  std::vector<std::int64_t> values;
  values.reserve(trajectories.size());
  for (const auto& tr : trajectories) {
    if (t < 0 || static_cast<std::size_t>(t) >= tr.size()) {
      throw std::out_of_range("marginal_at: t = " + std::to_string(t) + " lies beyond a trajectory");
    }
    values.push_back(tr[static_cast<std::size_t>(t)]);
  }
  return marginal_at(values, t, transform, condition_on_positive, b);
}

}  // namespace branchregen
