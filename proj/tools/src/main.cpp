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

#include <iostream>
#include <map>
#include <string>

#include <CLI/CLI.hpp>

#include "config.hpp"
#include "output.hpp"
#include "run.hpp"
#include "rydex/error.hpp"

namespace {

using rydex::cli::Experiment;

struct Command {
  Experiment experiment;
  const char* help;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dressed Rydberg-chain exciton transport simulations"};
  app.set_version_flag("--version", rydex::cli::version_string());
  app.require_subcommand(1);

  const std::map<std::string, Command> commands{
      {"transfer", {Experiment::Transfer, "Entanglement transfer through a designed chain"}},
      {"pump", {Experiment::Pump, "Exciton pumping under the modulated dressing"}},
      {"bound", {Experiment::Bound, "Dimer and high-order bound-state transport"}},
      {"hrs", {Experiment::Hrs, "Ballistic to diffusive crossover and decay factorization"}},
      {"chern", {Experiment::Chern, "Chern numbers of the three-band model"}},
      {"derive", {Experiment::Derive, "Dump effective-model coefficients"}},
      {"validate", {Experiment::Validate, "Run the invariant suite"}}};

  std::string config_path;
  rydex::cli::Overrides overrides;
  std::uint64_t seed = 0;
  int ensemble = 0;
  std::string out;
  int threads = 0;
  bool print_config = false;

  for (const auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, cmd.help);
    sub->add_option("--config", config_path, "YAML config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Base seed, replaces the seed list");
    if (cmd.experiment == Experiment::Transfer || cmd.experiment == Experiment::Bound ||
        cmd.experiment == Experiment::Hrs)
      sub->add_option("--ensemble", ensemble, "Ensemble or trajectory count")
          ->check(CLI::PositiveNumber);
    if (cmd.experiment == Experiment::Transfer || cmd.experiment == Experiment::Pump ||
        cmd.experiment == Experiment::Bound || cmd.experiment == Experiment::Hrs)
      sub->add_option("--engine", overrides.engines, "Engine to run; repeat to select several")
          ->check(CLI::IsMember({"exact", "effective", "trajectory"}));
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--plot,!--no-plot", "Write SVG plots");
    sub->add_flag("--print-config", print_config, "Print the resolved config and exit");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const Experiment experiment = commands.at(sub->get_name()).experiment;
    auto given = [sub](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--seed")) overrides.seed = seed;
    if (given("--ensemble")) overrides.ensemble = ensemble;
    if (given("--out")) overrides.out = out;
    if (given("--threads")) overrides.threads = threads;
    if (given("--plot")) overrides.plot = sub->get_option("--plot")->as<bool>();

    rydex::cli::RunConfig cfg =
        config_path.empty() ? rydex::cli::parse_config_text("{}", experiment)
                            : rydex::cli::parse_config_file(config_path, experiment);
    rydex::cli::apply_overrides(cfg, overrides);
    rydex::cli::validate_config(cfg);
    if (print_config) {
      std::cout << rydex::cli::emit_config(cfg);
      return 0;
    }
    return rydex::cli::execute(cfg, std::cout);
  } catch (const rydex::Error& e) {
    std::cerr << "rydex: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rydex: " << e.what() << "\n";
    return 2;
  }
}
