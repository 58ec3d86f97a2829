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

#ifndef RYDEX_EXPERIMENTS_HPP
#define RYDEX_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydex/hamiltonian.hpp"
#include "rydex/lattice.hpp"
#include "rydex/observables.hpp"

namespace rydex {

struct Parameter {
  std::string name;
  double value = 0.0;
  std::string unit;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "==" or "<", ">"
  std::string detail;
};

/// Mean and spread across realizations or trajectories.
struct EnsembleSeries {
  ObservableSeries mean;
  ObservableSeries spread;
  std::string spread_kind;  // "std" across realizations or "stderr" of the mean
  int realizations = 0;
  std::vector<std::uint64_t> seeds;
};

struct ExperimentReport {
  std::string id;
  std::vector<Parameter> parameters;
  std::vector<std::string> notes;
  std::vector<ObservableSeries> series;
  std::vector<EnsembleSeries> ensembles;
  std::vector<CheckResult> checks;

  bool passed() const;
  const ObservableSeries* find_series(const std::string& name) const;
  const EnsembleSeries* find_ensemble(const std::string& name) const;
  const CheckResult* find_check(const std::string& name) const;

  void add_parameter(const std::string& name, double value, const std::string& unit = "");
  /// Records value <= threshold (or >= when `at_least`).
  const CheckResult& check_bound(const std::string& name, double value, double threshold,
                                 bool at_least, const std::string& detail = "");
  const CheckResult& check_true(const std::string& name, bool ok, const std::string& detail = "");
};

/// Engines a driver may run. Unused engines are skipped.
struct EngineSet {
  bool effective = true;
  bool exact = true;
  bool trajectory = true;
};

// ---------------------------------------------------------------- transfer

struct TransferDesignOptions {
  double omega_guess = angular_mhz(5.0);
  double delta_guess = angular_mhz(50.0);
  EffectiveOptions effective{1, 0};
  /// Adds 2 pi k / t* to the undriven node's detuning.
  int phase_winding = 0;
  double exchange_tolerance = 1e-6;  // relative to J
  double onsite_tolerance = 1e-4;    // relative to J
};

struct TransferDesign {
  DressingProfile dressing;
  EffectiveModel model;
  double base_rate = 0.0;      // J
  double mu = 0.0;             // common on-site energy of the chain nodes
  double transfer_time = 0.0;  // pi / 2J
  double exchange_residual = 0.0;
  double onsite_residual = 0.0;
};

/// Chain of n + 1 atoms. Atom 0 is undriven; atoms 1..n form the transfer
/// chain with J_{i,i+1} = J sqrt(i (n - i)) and mu_i = mu. Omega_1 = Omega_n
/// closes the system. Delta_0 is set so that atom 0 has on-site energy mu,
/// which locks the relative phase of the two branches at t*.
TransferDesign design_transfer_couplings(const ChainSpec& chain, double base_rate, double mu,
                                         const TransferDesignOptions& options = {});

/// Reference values used when J or mu is not given: J from the homogeneous
/// nearest-neighbour exchange divided by max sqrt(i (n - i)), mu as the mean
/// on-site energy of the homogeneous chain.
double default_transfer_rate(const ChainSpec& chain, double omega, double delta);
double default_transfer_mu(const ChainSpec& chain, double omega, double delta,
                           const EffectiveOptions& options);

struct TransferConfig {
  int n_atoms = 7;
  double spacing = 4.4;  // um
  double omega = angular_mhz(5.0);
  double delta = angular_mhz(50.0);
  double v_ratio = 3.0;  // V(d) / Delta
  std::optional<double> base_rate;
  std::optional<double> mu;
  double duration = 1.5;  // in units of t*
  int n_outputs = 151;
  EngineSet engines;
  int ensemble = 500;
  int exact_ensemble = 50;
  double sigma = 0.1;  // um
  std::vector<double> sigma_sweep{0.0, 0.05, 0.1, 0.15, 0.2};
  int sweep_ensemble = 100;
  double exact_concurrence_floor = 0.95;
  std::uint64_t seed = 1;
  int threads = 1;
};

ExperimentReport run_entanglement_transfer(const TransferConfig& cfg);

// -------------------------------------------------------------------- pump

struct PumpConfig {
  int n_sites = 12;
  double spacing = 4.4;
  double omega = angular_mhz(5.0);
  double delta = angular_mhz(20.0);
  double v_ratio = 3.0;
  double period = 27.7;  // us
  double steepness = 5.6;
  int unit = 0;
  bool periodic = true;
  double dt_max = 0.05;
  int n_outputs = 101;
  EngineSet engines;
  double nonadiabatic_factor = 0.1;
  double displacement_tolerance = 0.05;
  /// Smallest relative NN/NNN difference of <x^2> over t >= T/2.
  double msd_split = 0.1;
  int threads = 1;
};

ExperimentReport run_thouless_pump(const PumpConfig& cfg);

// ------------------------------------------------------------ bound states

struct BoundConfig {
  double omega = angular_mhz(5.0);
  double spacing = 4.4;

  bool run_dimer = true;
  int dimer_sites = 12;
  double dimer_delta = angular_mhz(-400.0);
  double dimer_v_ratio = -1.1;
  int dimer_left = 5;
  double dimer_t_final = 15.0;
  double dimer_weight_floor = 0.9;

  bool run_high_order = true;
  int sites = 13;
  double delta = angular_mhz(30.0);
  double v_ratio = 3.0;
  int left = 5;  // the pair occupies left and left + 2
  double t_final = 9.0;
  double gamma = 0.2;  // 1/us
  int trajectories = 200;

  int n_outputs = 31;
  std::vector<double> map_times{0.0, 3.0, 6.0, 9.0};
  EngineSet engines;
  std::uint64_t seed = 1;
  int threads = 1;
};

ExperimentReport run_bound_state_transport(const BoundConfig& cfg);

// --------------------------------------------------------------------- HRS

/// J_d = Omega^2 V(d d) / 4 Delta (Delta + V(d d)) for d = 1..range on a
/// homogeneous chain.
Eigen::VectorXd homogeneous_hopping(double omega, double delta, double v_nn, int range);

struct HrsConfig {
  int n_sites = 11;
  double spacing = 4.4;
  double omega = angular_mhz(5.0);
  double delta = angular_mhz(50.0);
  double v_ratio = 3.0;
  std::vector<double> gammas{0.8};
  double t_final = 3.5;
  int n_outputs = 36;
  int trajectories = 200;
  int hrs_sites = 201;
  int hopping_range = 5;
  double law_tolerance = 0.05;
  double hrs_tolerance = 1e-6;

  double factorization_gamma = 0.1;
  double factorization_kappa = 0.05;
  double factorization_ratio = 10.0;  // Delta / Omega
  int factorization_sites = 11;
  double factorization_t_final = 10.0;
  double factorization_tolerance = 1e-6;

  EngineSet engines;
  std::uint64_t seed = 1;
  int threads = 1;
};

ExperimentReport run_hrs_crossover(const HrsConfig& cfg);

// ------------------------------------------------------------------- Chern

struct ChernConfig {
  double omega = angular_mhz(5.0);
  double delta = angular_mhz(20.0);
  double v_ratio = 3.0;
  double spacing = 4.4;
  bool next_nearest = false;
  std::vector<int> grids{32, 64, 128};
  std::vector<int> expected{1, -2, 1};
};

ExperimentReport run_chern(const ChernConfig& cfg);

// -------------------------------------------------------------- validation

/// Invariant suite: Hermiticity, norm and trace conservation, exciton-number
/// conservation, g2 normalization, projection idempotence, Chern sum rule,
/// schedule endpoints and the single-atom dephasing rate.
ExperimentReport run_validation_suite(std::uint64_t seed = 1);

}  // namespace rydex

#endif  // RYDEX_EXPERIMENTS_HPP
