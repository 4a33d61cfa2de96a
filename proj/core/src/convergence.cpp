#include "branchregen/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace branchregen {

void parallel_for_chunks(std::size_t n, int workers, std::size_t chunk_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (chunk_size == 0) throw std::invalid_argument("parallel_for_chunks: chunk size must be positive");
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), chunks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::int64_t> ReplicationValues::values_at(std::size_t h) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(zeros.at(h)), 0);
  out.insert(out.end(), positive.at(h).begin(), positive.at(h).end());
  return out;
}

ReplicationValues run_replications(const ReplicationGenerator& generator,
                                   std::span<const std::int64_t> horizons, std::int64_t replications,
                                   std::uint64_t seed, int workers, std::uint64_t stream_offset) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  for (std::size_t i = 1; i < horizons.size(); ++i) {
    if (horizons[i] <= horizons[i - 1]) throw std::invalid_argument("horizons must be increasing");
  }
  const std::size_t h_count = horizons.size();
  constexpr std::size_t kChunk = 256;
  const auto n = static_cast<std::size_t>(replications);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;

  struct ChunkResult {
    std::vector<std::vector<std::int64_t>> positive;
    std::vector<std::int64_t> zeros;
  };
  std::vector<ChunkResult> partial(chunks);

  parallel_for_chunks(n, workers, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& slot = partial[c];
    slot.positive.assign(h_count, {});
    slot.zeros.assign(h_count, 0);
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng(seed, stream_offset + i);
      const auto values = generator(horizons, rng);
      if (values.size() != h_count) {
        throw std::logic_error("replication generator returned the wrong number of values");
      }
      for (std::size_t h = 0; h < h_count; ++h) {
        if (values[h] > 0) {
          slot.positive[h].push_back(values[h]);
        } else {
          ++slot.zeros[h];
        }
      }
    }
  });

  ReplicationValues out;
  out.horizons.assign(horizons.begin(), horizons.end());
  out.replications = replications;
  out.positive.assign(h_count, {});
  out.zeros.assign(h_count, 0);
  for (auto& slot : partial) {
    for (std::size_t h = 0; h < h_count; ++h) {
      out.positive[h].insert(out.positive[h].end(), slot.positive[h].begin(), slot.positive[h].end());
      out.zeros[h] += slot.zeros[h];
    }
  }
  return out;
}

ConvergenceReport convergence_report(const ReplicationValues& values, const LimitLaw& law,
                                     const ConvergenceSettings& settings) {
  ConvergenceReport report;
  report.horizons = values.horizons;
  report.target_law = law.describe();
  report.transform = to_string(settings.transform);
  report.conditional = settings.condition_on_positive;
  report.replications = values.replications;
  report.seed = settings.seed;
  for (std::size_t h = 0; h < values.horizons.size(); ++h) {
    const std::int64_t t = values.horizons[h];
    const double survival =
        static_cast<double>(values.positive[h].size()) / static_cast<double>(values.replications);
    report.survival_fractions.push_back(survival);
    const bool needs_positive =
        settings.condition_on_positive || settings.transform == MarginalTransform::log_over_log_t;
    if (needs_positive && values.positive[h].empty()) {
      report.ks.push_back(1.0);
      report.sample_counts.push_back(0);
      report.sample_means.push_back(0.0);
      report.marginals.emplace_back();
      continue;
    }
    const auto all = values.values_at(h);
    auto marginal = marginal_at(all, t, settings.transform, settings.condition_on_positive, settings.b);
    report.ks.push_back(ks_distance(marginal.distribution, law));
    report.sample_counts.push_back(static_cast<std::int64_t>(marginal.distribution.count()));
    report.sample_means.push_back(marginal.distribution.mean());
    report.marginals.push_back(std::move(marginal.distribution));
  }
  return report;
}

ConvergenceReport convergence_study(const ReplicationGenerator& generator, const LimitLaw& law,
                                    const ConvergenceSettings& settings) {
  if (settings.horizons.empty()) throw std::invalid_argument("convergence study: no horizons");
  const auto values = run_replications(generator, settings.horizons, settings.replications,
                                       settings.seed, settings.workers, settings.stream_offset);
  return convergence_report(values, law, settings);
}

std::string to_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["horizons"] = report.horizons;
  j["ks"] = report.ks;
  j["survival_fractions"] = report.survival_fractions;
  j["sample_counts"] = report.sample_counts;
  j["sample_means"] = report.sample_means;
  j["target_law"] = report.target_law;
  j["transform"] = report.transform;
  j["conditional"] = report.conditional;
  j["replications"] = report.replications;
  j["seed"] = report.seed;
  return j.dump(2);
}

ConvergenceReport convergence_report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ConvergenceReport r;
  j.at("horizons").get_to(r.horizons);
  j.at("ks").get_to(r.ks);
  j.at("survival_fractions").get_to(r.survival_fractions);
  j.at("sample_counts").get_to(r.sample_counts);
  j.at("sample_means").get_to(r.sample_means);
  j.at("target_law").get_to(r.target_law);
  j.at("transform").get_to(r.transform);
  j.at("conditional").get_to(r.conditional);
  j.at("replications").get_to(r.replications);
  j.at("seed").get_to(r.seed);
  return r;
}

std::string to_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "horizon,ks,survival_fraction,sample_count,sample_mean\n";
  for (std::size_t h = 0; h < report.horizons.size(); ++h) {
    out << report.horizons[h] << ',' << report.ks[h] << ',' << report.survival_fractions[h] << ','
        << report.sample_counts[h] << ',' << report.sample_means[h] << '\n';
  }
  return out.str();
}

}  // namespace branchregen
