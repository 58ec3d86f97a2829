// Copyright 2026 The rydex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "output.hpp"
#include "plot.hpp"
#include "run.hpp"

namespace rydex::cli {
namespace {

TEST(Output, Fixed17RoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::strtod(fixed17(x).c_str(), nullptr), x);
  }
}

TEST(Output, SeriesTableHasMetadataAndColumns) {
  ObservableSeries s;
  s.name = "x_mean";
  s.note = "test";
  s.columns = {"a", "b"};
  s.append(0.0, (Eigen::MatrixXd(2, 1) << 1.0, 2.0).finished());
  s.append(0.5, (Eigen::MatrixXd(2, 1) << 3.0, 0.1).finished());
  TableMeta meta;
  meta.experiment = "pump";
  meta.seed = 7;
  const std::string csv = series_csv(s, meta);
  EXPECT_NE(csv.find("# rydex " + std::string(version_string())), std::string::npos);
  EXPECT_NE(csv.find("# seed: 7"), std::string::npos);
  EXPECT_NE(csv.find("t,a,b\n"), std::string::npos);
  EXPECT_NE(csv.find("0.5,3,0.10000000000000001\n"), std::string::npos);
}

TEST(Output, ReportJsonCarriesChecksAndConfig) {
  const RunConfig cfg = parse_config_text("{}", Experiment::Chern);
  ChernConfig chern;
  chern.grids = {16};
  const ExperimentReport rep = run_chern(chern);
  const nlohmann::json j = report_json(rep, cfg, 1);
  EXPECT_EQ(j.at("experiment"), "chern");
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_FALSE(j.at("checks").empty());
  EXPECT_EQ(parse_config_text(j.at("config").get<std::string>()).experiment, Experiment::Chern);
}

TEST(Output, ExecuteIsDeterministicAndPlotsLeaveDataUnchanged) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "rydex_output_test";
  fs::remove_all(root);
  RunConfig cfg = parse_config_text("{}", Experiment::Pump);
  cfg.engines = EngineSet{true, false, false};
  cfg.pump.n_outputs = 21;
  std::ostringstream log;
  cfg.output.dir = (root / "a").string();
  EXPECT_EQ(execute(cfg, log), 0);
  cfg.output.dir = (root / "b").string();
  cfg.output.svg = false;
  EXPECT_EQ(execute(cfg, log), 0);
  EXPECT_TRUE(fs::exists(root / "a" / "pump.svg"));
  EXPECT_TRUE(fs::exists(root / "a" / "x_mean.csv"));
  EXPECT_FALSE(fs::exists(root / "b" / "pump.svg"));
  for (const auto& entry : fs::directory_iterator(root / "b")) {
    if (entry.path().extension() != ".csv") continue;
    auto read = [](const fs::path& p) {
      std::ifstream in(p);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    EXPECT_EQ(read(entry.path()), read(root / "a" / entry.path().filename()))
        << entry.path().filename();
  }
  fs::remove_all(root);
}

TEST(Plot, ChartsAreSelfContainedSvg) {
  Curve c;
  c.label = "a<b";
  c.x = {0.0, 1.0, 2.0};
  c.y = {0.0, 1.0, 4.0};
  c.err = {0.1, 0.1, 0.2};
  const std::string svg = line_chart({"title", "x", "y"}, {c});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_EQ(svg.find("http://www.w3.org/2000/svg"), svg.find("http"));
  EXPECT_EQ(svg, line_chart({"title", "x", "y"}, {c}));

  HeatPanel p;
  p.z = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(heatmaps({"t", "x", "y"}, {p}).rfind("<svg", 0), 0u);
  EXPECT_EQ(bar_chart({"t", "x", "y"}, {0, 1}, {0.5, 0.5}, {}).rfind("<svg", 0), 0u);
}

}  // namespace
}  // namespace rydex::cli
