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

#ifndef RYDEX_TOOLS_PLOT_HPP
#define RYDEX_TOOLS_PLOT_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rydex/experiments.hpp"

namespace rydex::cli {

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars
  bool dashed = false;
  bool markers = false;
};

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
};

std::string line_chart(const Axes& axes, const std::vector<Curve>& curves);

/// Bars at `x` with optional overlaid curves.
std::string bar_chart(const Axes& axes, const std::vector<double>& x,
                      const std::vector<double>& heights, const std::vector<Curve>& overlay);

struct HeatPanel {
  std::string title;
  Eigen::MatrixXd z;  // z(row, col), row along y
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
};

/// Panels side by side sharing one color scale from the global range.
std::string heatmaps(const Axes& axes, const std::vector<HeatPanel>& panels);

/// Figures for a report as (file name, SVG text). Reads only the report tables.
std::vector<std::pair<std::string, std::string>> render_report(const ExperimentReport& rep,
                                                              const std::vector<double>& map_times);

}  // namespace rydex::cli

#endif  // RYDEX_TOOLS_PLOT_HPP
