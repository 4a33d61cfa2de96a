#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "branchregen/experiment_config.hpp"
#include "branchregen/experiments.hpp"

namespace branchregen {

/// Full record as JSON. Without timing, wall_seconds is left out so equal
/// runs produce identical text.
std::string to_json(const ResultRecord& record, bool include_timing = true);
ResultRecord result_record_from_json(const std::string& text);

/// Header "horizon,ks,survival_fraction,sample_count,sample_mean" and one
/// row per horizon.
std::string to_csv(const ResultRecord& record);

/// Rows "horizon,x,empirical_cdf,analytic_cdf" on a strictly increasing grid
/// of `points` x values per horizon, spanning the 0.1% to 99.9% sample
/// quantiles. The analytic column is the record's reference CDF.
std::string plot_data_csv(const ResultRecord& record, int points = 200);

/// "t,value" rows.
std::string trajectory_csv(const Trajectory& trajectory);

/// Writes through a temporary file in the same directory and renames it
/// into place. Throws std::runtime_error naming the path on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes result.json, result.csv and plot-data.csv (as requested) into
/// `directory`, creating it if needed. Returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const ResultRecord& record, std::span<const OutputFormat> formats,
                                                const std::filesystem::path& directory);

}  // namespace branchregen
