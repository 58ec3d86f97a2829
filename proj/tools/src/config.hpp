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

#ifndef RYDEX_TOOLS_CONFIG_HPP
#define RYDEX_TOOLS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydex/experiments.hpp"
#include "rydex/hamiltonian.hpp"

namespace rydex::cli {

enum class Experiment { Transfer, Pump, Bound, Hrs, Chern, Derive, Validate };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Physical dimension of a config value and the suffixes it accepts.
///   frequency: MHz, kHz (times 2 pi), rad/us
///   rate:      1/us, MHz, kHz (times 2 pi only under the angular convention)
///   time:      us, ns, ms
///   length:    um, nm
enum class Dimension { Frequency, Rate, Time, Length };

enum class RateConvention { Plain, Angular };

/// Parses "5 MHz" style text into the canonical unit (rad/us, 1/us, us, um).
/// Throws ParseError (line 0) when the suffix is missing or unknown.
double parse_quantity(const std::string& text, Dimension dim,
                      RateConvention rates = RateConvention::Plain);

/// Canonical text of a value, 17 significant digits plus the canonical suffix.
std::string format_quantity(double value, Dimension dim);

/// Coefficient dump settings.
struct DeriveConfig {
  int n_sites = 7;
  double spacing = 4.4;
  double omega = angular_mhz(5.0);
  double delta = angular_mhz(50.0);
  double v_ratio = 3.0;
  bool periodic = false;
  EffectiveOptions options;
};

struct OutputConfig {
  std::string dir;
  bool csv = true;
  bool json = true;
  bool svg = true;
};

/// Fully resolved run. Values are stored in canonical units.
struct RunConfig {
  Experiment experiment = Experiment::Transfer;
  std::vector<std::uint64_t> seeds{1};
  int threads = 1;
  EngineSet engines;
  RateConvention rate_convention = RateConvention::Plain;
  OutputConfig output;

  TransferConfig transfer;
  PumpConfig pump;
  BoundConfig bound;
  HrsConfig hrs;
  ChernConfig chern;
  DeriveConfig derive;

  /// Dotted key -> "default", "file" or "flag".
  std::map<std::string, std::string> provenance;
};

RunConfig default_config(Experiment e);

/// Reads YAML text. `expected` rejects files written for another experiment.
RunConfig parse_config_text(const std::string& text,
                            std::optional<Experiment> expected = std::nullopt);
RunConfig parse_config_file(const std::string& path,
                            std::optional<Experiment> expected = std::nullopt);

/// YAML document with every key of the experiment in canonical units.
std::string emit_config(const RunConfig& cfg);

/// Cross-field checks: engine sizes, seeds, sample counts.
void validate_config(const RunConfig& cfg);

/// Largest chain the exact and trajectory engines accept (dimension 2^N).
inline constexpr int kExactMaxSites = 14;

}  // namespace rydex::cli

#endif  // RYDEX_TOOLS_CONFIG_HPP
