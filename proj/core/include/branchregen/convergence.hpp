#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "branchregen/limits.hpp"
#include "branchregen/rng.hpp"
#include "branchregen/stats.hpp"

namespace branchregen {

/// Calls body(chunk, begin, end) for consecutive index ranges of size
/// `chunk_size` covering [0, n), spread over `workers` threads (0 means
/// hardware concurrency). Chunks are claimed dynamically, so callers must
/// write results into per-chunk slots; the first exception is rethrown.
void parallel_for_chunks(std::size_t n, int workers, std::size_t chunk_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Values of one replication at each requested horizon.
using ReplicationGenerator =
    std::function<std::vector<std::int64_t>(std::span<const std::int64_t>, RngStream&)>;

/// Positive values per horizon in replication order, plus zero counts.
struct ReplicationValues {
  std::vector<std::int64_t> horizons;
  std::int64_t replications = 0;
  std::vector<std::vector<std::int64_t>> positive;
  std::vector<std::int64_t> zeros;

  /// All values at horizon index h (zeros first).
  std::vector<std::int64_t> values_at(std::size_t h) const;
};

/// Replication i draws from RngStream(seed, stream_offset + i), so the
/// result does not depend on the worker count.
ReplicationValues run_replications(const ReplicationGenerator& generator,
                                   std::span<const std::int64_t> horizons, std::int64_t replications,
                                   std::uint64_t seed, int workers, std::uint64_t stream_offset = 0);

struct ConvergenceSettings {
  std::vector<std::int64_t> horizons;
  std::int64_t replications = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::uint64_t stream_offset = 0;
  MarginalTransform transform = MarginalTransform::divide_by_bt;
  bool condition_on_positive = false;
  double b = 1.0;
};

struct ConvergenceReport {
  std::vector<std::int64_t> horizons;
  std::vector<double> ks;
  std::vector<double> survival_fractions;
  std::vector<std::int64_t> sample_counts;
  std::vector<double> sample_means;
  std::string target_law;
  std::string transform;
  bool conditional = false;
  std::int64_t replications = 0;
  std::uint64_t seed = 0;

  /// Transformed marginals, one per horizon; not serialized.
  std::vector<EmpiricalDistribution> marginals;

  friend bool operator==(const ConvergenceReport& a, const ConvergenceReport& b) {
    return a.horizons == b.horizons && a.ks == b.ks && a.survival_fractions == b.survival_fractions &&
           a.sample_counts == b.sample_counts && a.sample_means == b.sample_means &&
           a.target_law == b.target_law && a.transform == b.transform &&
           a.conditional == b.conditional && a.replications == b.replications && a.seed == b.seed;
  }
};

/// Simulates the replications and records the KS distance to `law` of the
/// transformed marginal at each horizon. Horizons with no usable sample
/// get KS = 1.
ConvergenceReport convergence_study(const ReplicationGenerator& generator, const LimitLaw& law,
                                    const ConvergenceSettings& settings);

/// Report from already simulated values.
ConvergenceReport convergence_report(const ReplicationValues& values, const LimitLaw& law,
                                     const ConvergenceSettings& settings);

std::string to_json(const ConvergenceReport& report);
ConvergenceReport convergence_report_from_json(const std::string& text);
/// Header plus one row per horizon.
std::string to_csv(const ConvergenceReport& report);

}  // namespace branchregen
