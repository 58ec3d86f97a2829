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

#ifndef RYDEX_TOOLS_RUN_HPP
#define RYDEX_TOOLS_RUN_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "rydex/experiments.hpp"

namespace rydex::cli {

/// Coefficients of the effective model as a report without checks.
ExperimentReport derive_report(const DeriveConfig& cfg);

/// Runs the configured experiment for one seed.
ExperimentReport run_experiment(const RunConfig& cfg, std::uint64_t seed);

/// Command-line overrides applied on top of the file and defaults.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> ensemble;
  std::vector<std::string> engines;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<bool> plot;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Runs every seed, writes tables, report and plots, and prints one line per
/// check. Returns 0 when every check passes and 1 otherwise.
int execute(const RunConfig& cfg, std::ostream& log);

}  // namespace rydex::cli

#endif  // RYDEX_TOOLS_RUN_HPP
