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

#include "run.hpp"

#include <ostream>

#include "output.hpp"
#include "plot.hpp"
#include "rydex/error.hpp"

namespace rydex::cli {

namespace fs = std::filesystem;

ExperimentReport derive_report(const DeriveConfig& cfg) {
  ExperimentReport rep;
  rep.id = "derive";
  rep.add_parameter("n_sites", cfg.n_sites);
  rep.add_parameter("spacing", cfg.spacing, "um");
  rep.add_parameter("omega", cfg.omega, "rad/us");
  rep.add_parameter("delta", cfg.delta, "rad/us");
  rep.add_parameter("v_nn", cfg.v_ratio * cfg.delta, "rad/us");
  const ChainSpec chain = ChainSpec::from_nn_shift(
      cfg.n_sites, cfg.spacing, cfg.v_ratio * cfg.delta, 0.0,
      cfg.periodic ? Boundary::Periodic : Boundary::Open);
  const DressingProfile dressing =
      DressingProfile::homogeneous(cfg.n_sites, cfg.omega, cfg.delta);
  const EffectiveModel m = derive_effective(chain, dressing, 0.0, cfg.options);
  auto put = [&](const std::string& name, const std::string& note, const Eigen::MatrixXd& v) {
    ObservableSeries s;
    s.name = name;
    s.note = note;
    s.append(0.0, v);
    rep.series.push_back(std::move(s));
  };
  put("mu", "on-site energy per site, rad/us", m.mu);
  put("exchange", "J_ij, rad/us", m.exchange);
  put("ising", "I_ij, rad/us", m.ising);
  put("exciton_interaction", "U_ij, rad/us", m.exciton_interaction);
  put("dimer_exchange", "J2_i coupling dimers (i, i+1) and (i+1, i+2), rad/us",
      m.dimer_exchange);
  put("dimer_onsite", "epsilon_i of dimer (i, i+1), rad/us", m.dimer_onsite);
  rep.notes = m.warnings;
  return rep;
}

ExperimentReport run_experiment(const RunConfig& cfg, std::uint64_t seed) {
  switch (cfg.experiment) {
    case Experiment::Transfer: {
      TransferConfig c = cfg.transfer;
      c.engines = cfg.engines;
      c.seed = seed;
      c.threads = cfg.threads;
      return run_entanglement_transfer(c);
    }
    case Experiment::Pump: {
      PumpConfig c = cfg.pump;
      c.engines = cfg.engines;
      c.threads = cfg.threads;
      return run_thouless_pump(c);
    }
    case Experiment::Bound: {
      BoundConfig c = cfg.bound;
      c.engines = cfg.engines;
      c.seed = seed;
      c.threads = cfg.threads;
      return run_bound_state_transport(c);
    }
    case Experiment::Hrs: {
      HrsConfig c = cfg.hrs;
      c.engines = cfg.engines;
      c.seed = seed;
      c.threads = cfg.threads;
      return run_hrs_crossover(c);
    }
    case Experiment::Chern:
      return run_chern(cfg.chern);
    case Experiment::Derive:
      return derive_report(cfg.derive);
    case Experiment::Validate:
      return run_validation_suite(seed);
  }
  throw ValidationError("unknown experiment");
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) {
    cfg.seeds = {*o.seed};
    cfg.provenance["seeds"] = "flag";
  }
  if (o.threads) {
    cfg.threads = *o.threads;
    cfg.provenance["threads"] = "flag";
  }
  if (o.out) {
    cfg.output.dir = *o.out;
    cfg.provenance["output.dir"] = "flag";
  }
  if (o.plot) {
    cfg.output.svg = *o.plot;
    cfg.provenance["output.formats"] = "flag";
  }
  if (!o.engines.empty()) {
    if (cfg.experiment == Experiment::Chern || cfg.experiment == Experiment::Derive ||
        cfg.experiment == Experiment::Validate)
      throw ValidationError("--engine does not apply to " + experiment_name(cfg.experiment));
    cfg.engines = EngineSet{false, false, false};
    for (const auto& e : o.engines) {
      if (e == "effective") {
        cfg.engines.effective = true;
      } else if (e == "exact") {
        cfg.engines.exact = true;
      } else if (e == "trajectory") {
        cfg.engines.trajectory = true;
      } else {
        throw ValidationError("unknown engine '" + e + "'");
      }
    }
    cfg.provenance["engines"] = "flag";
  }
  if (o.ensemble) {
    const int k = *o.ensemble;
    if (k < 1) throw ValidationError("--ensemble must be positive");
    switch (cfg.experiment) {
      case Experiment::Transfer:
        cfg.transfer.ensemble = cfg.transfer.exact_ensemble = cfg.transfer.sweep_ensemble = k;
        cfg.provenance["transfer.ensemble"] = cfg.provenance["transfer.exact_ensemble"] =
            cfg.provenance["transfer.sweep_ensemble"] = "flag";
        break;
      case Experiment::Bound:
        cfg.bound.trajectories = k;
        cfg.provenance["evolution.trajectories"] = "flag";
        break;
      case Experiment::Hrs:
        cfg.hrs.trajectories = k;
        cfg.provenance["evolution.trajectories"] = "flag";
        break;
      default:
        throw ValidationError("--ensemble does not apply to " + experiment_name(cfg.experiment));
    }
  }
}

int execute(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  bool all_passed = true;
  for (const std::uint64_t seed : cfg.seeds) {
    const fs::path dir = cfg.seeds.size() > 1
                             ? fs::path(cfg.output.dir) / ("seed_" + std::to_string(seed))
                             : fs::path(cfg.output.dir);
    const ExperimentReport rep = run_experiment(cfg, seed);
    const auto written = write_report(rep, cfg, seed, dir);
    std::size_t plots = 0;
    if (cfg.output.svg) {
      const std::vector<double> map_times =
          cfg.experiment == Experiment::Bound ? cfg.bound.map_times : std::vector<double>{};
      for (const auto& [name, svg] : render_report(rep, map_times)) {
        write_text(dir / name, svg);
        ++plots;
      }
    }
    for (const auto& note : rep.notes) log << "note: " << note << "\n";
    for (const auto& c : rep.checks)
      log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << fixed17(c.value) << " "
          << c.relation << " " << fixed17(c.threshold)
          << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    log << rep.id << " seed " << seed << ": " << written.size() << " data files, " << plots
        << " plots in " << dir.string() << "\n";
    all_passed = all_passed && rep.passed();
  }
  return all_passed ? 0 : 1;
}

}  // namespace rydex::cli
