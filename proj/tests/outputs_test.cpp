#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "branchregen/experiments.hpp"
#include "branchregen/outputs.hpp"

using namespace branchregen;
namespace fs = std::filesystem;

namespace {

ResultRecord sample_record() {
  return run_experiment(parse_config("schema_version: 1\nexperiment: custom\nreplications: 400\nhorizons: [20, 80]\n"));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream l(line);
    std::string cell;
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("branchregen-" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Json, RoundTripIsExact) {
  const auto r = sample_record();
  const auto back = result_record_from_json(to_json(r));
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json(back), to_json(r));
}

TEST(Json, NonFiniteValuesSurvive) {
  ResultRecord r;
  r.experiment = "custom";
  r.references.push_back({"c_estimate", std::numeric_limits<double>::quiet_NaN()});
  const auto back = result_record_from_json(to_json(r));
  ASSERT_EQ(back.references.size(), 1u);
  EXPECT_TRUE(std::isnan(back.references[0].value));
}

TEST(Json, TimingIsOptional) {
  auto r = sample_record();
  const auto a = to_json(r, false);
  r.wall_seconds += 10;
  EXPECT_EQ(a, to_json(r, false));
  EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
}

TEST(Csv, OneRowPerHorizon) {
  const auto rows = parse_csv(to_csv(sample_record()));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"horizon", "ks", "survival_fraction", "sample_count", "sample_mean"}));
  EXPECT_EQ(rows[1][0], "20");
  EXPECT_EQ(rows[2][0], "80");
}

TEST(Csv, EmptyHorizonsGiveHeaderOnly) {
  EXPECT_EQ(to_csv(ResultRecord{}), "horizon,ks,survival_fraction,sample_count,sample_mean\n");
}

TEST(PlotData, GridIsIncreasingAndCdfsAreProbabilities) {
  const auto rows = parse_csv(plot_data_csv(sample_record(), 50));
  ASSERT_EQ(rows.size(), 1u + 2 * 50);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"horizon", "x", "empirical_cdf", "analytic_cdf"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double f = std::stod(rows[i][2]), g = std::stod(rows[i][3]);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0);
    if (i > 1 && rows[i][0] == rows[i - 1][0]) {
      EXPECT_GT(std::stod(rows[i][1]), std::stod(rows[i - 1][1]));
    }
  }
}

TEST(Trajectory, Csv) {
  EXPECT_EQ(trajectory_csv(Trajectory{{0, 4, 2}}), "t,value\n0,0\n1,4\n2,2\n");
}

TEST(Files, EmitWritesRequestedFormats) {
  const auto dir = scratch_dir("emit");
  const std::vector<OutputFormat> formats{OutputFormat::json, OutputFormat::csv, OutputFormat::plot_data};
  const auto written = emit_outputs(sample_record(), formats, dir / "nested");
  ASSERT_EQ(written.size(), 3u);
  for (const auto& p : written) EXPECT_TRUE(fs::exists(p)) << p;
  EXPECT_FALSE(fs::exists(dir / "nested" / "result.json.tmp"));
  fs::remove_all(dir);
}

TEST(Files, ErrorsNameThePath) {
  const auto dir = scratch_dir("missing");
  try {
    write_file_atomic(dir / "no" / "such" / "file.json", "{}");
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("file.json"), std::string::npos);
  }
}
