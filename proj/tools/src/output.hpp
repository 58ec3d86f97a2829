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

#ifndef RYDEX_TOOLS_OUTPUT_HPP
#define RYDEX_TOOLS_OUTPUT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "rydex/experiments.hpp"

namespace rydex::cli {

/// Labels of the flattened record entries, row-major.
std::vector<std::string> column_labels(const ObservableSeries& s);

/// Number text with 17 significant digits.
std::string fixed17(double x);

struct TableMeta {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> member_seeds;
  int realizations = 0;
  std::string spread_kind;
};

/// Delimited table with '#' metadata lines: one row per sample time.
std::string series_csv(const ObservableSeries& s, const TableMeta& meta);
/// Mean columns followed by the spread columns.
std::string ensemble_csv(const EnsembleSeries& e, const TableMeta& meta);

/// Machine-readable report with parameters, seeds, series and checks.
nlohmann::json report_json(const ExperimentReport& rep, const RunConfig& cfg, std::uint64_t seed);

/// Writes text, creating parent directories. Throws rydex::Error on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes every series and ensemble as CSV and the report as JSON.
/// Returns the paths written.
std::vector<std::filesystem::path> write_report(const ExperimentReport& rep, const RunConfig& cfg,
                                                std::uint64_t seed,
                                                const std::filesystem::path& dir);

const char* version_string();

}  // namespace rydex::cli

#endif  // RYDEX_TOOLS_OUTPUT_HPP
