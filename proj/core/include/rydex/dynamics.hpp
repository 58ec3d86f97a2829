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

#ifndef RYDEX_DYNAMICS_HPP
#define RYDEX_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydex/basis.hpp"
#include "rydex/hamiltonian.hpp"
#include "rydex/lattice.hpp"

namespace rydex {

enum class Method { DenseExpm, AdaptiveRk, Krylov };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct EvolutionConfig {
  double t_final = 1.0;
  /// Longest step over which a time-dependent Hamiltonian is held frozen.
  double dt_max = 0.05;
  Method method = Method::Krylov;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int trajectory_count = 1;
  std::uint64_t seed = 0;
  /// Explicit sample times in [0, t_final]; empty means n_outputs evenly
  /// spaced points including both ends.
  std::vector<double> output_times;
  int n_outputs = 101;
  /// Worker threads for trajectory ensembles; 0 uses the hardware count.
  int threads = 1;
  /// Largest basis dimension accepted by the dense density-matrix engines.
  std::size_t dense_cap = 2048;
  /// Krylov subspace size.
  int krylov_dim = 40;

  void validate(bool trajectory_mode = false) const;
  std::vector<double> sample_times() const;
};

/// A Hamiltonian over a fixed basis, either constant or re-evaluated on demand.
/// Time-dependent handles are held frozen over steps no longer than dt_max and
/// evaluated at the step midpoint.
class HamiltonianHandle {
 public:
  using Generator = std::function<RealSparse(double)>;

  static HamiltonianHandle constant(BasisPtr basis, RealSparse matrix);
  static HamiltonianHandle time_dependent(BasisPtr basis, Generator generator);
  /// Exact model on the full basis.
  static HamiltonianHandle exact(const ChainSpec& chain, const DressingProfile& dressing);
  /// Effective model over a sector basis; energy_shift is removed per exciton.
  static HamiltonianHandle effective(const ChainSpec& chain,
                                     const DressingProfile& dressing,
                                     BasisPtr basis,
                                     const EffectiveOptions& options = {},
                                     double energy_shift = 0.0);

  BasisPtr basis() const { return basis_; }
  bool is_constant() const { return !generator_; }
  /// Matrix at time t. Safe to call concurrently.
  std::shared_ptr<const RealSparse> at(double t) const;

 private:
  BasisPtr basis_;
  std::shared_ptr<const RealSparse> fixed_;
  Generator generator_;
};

struct StateSeries {
  std::vector<double> times;
  std::vector<QuantumState> states;
};

struct DensitySeries {
  std::vector<double> times;
  std::vector<DensityOperator> states;
};

using StateObserver = std::function<void(double, const QuantumState&)>;
using DensityObserver = std::function<void(double, const DensityOperator&)>;

/// exp(-i tau (H - i/2 diag(decay))) v by Krylov projection with adaptive
/// sub-stepping. `decay` may be null for Hermitian propagation.
Eigen::VectorXcd krylov_expv(const RealSparse& h, const Eigen::VectorXd* decay,
                             const Eigen::VectorXcd& v, double tau,
                             int krylov_dim = 40, double tol = 1e-10);

void evolve_unitary(const HamiltonianHandle& h, const QuantumState& psi0,
                    const EvolutionConfig& cfg, const StateObserver& observer);
StateSeries evolve_unitary(const HamiltonianHandle& h, const QuantumState& psi0,
                           const EvolutionConfig& cfg);

/// Dense master-equation integration with jump operators sqrt(gamma) n_i and
/// sqrt(kappa) sigma_-^i. On sector bases the decay channel leaves the basis,
/// so the trace decays instead of flowing into lower sectors. Methods:
/// adaptive-rk in the frame of the diagonal energies, dense-expm of the
/// superoperator for small bases, and krylov as restarted Arnoldi on vec(rho).
void evolve_lindblad(const HamiltonianHandle& h, const NoiseSpec& noise,
                     const DensityOperator& rho0, const EvolutionConfig& cfg,
                     const DensityObserver& observer);
DensitySeries evolve_lindblad(const HamiltonianHandle& h, const NoiseSpec& noise,
                              const DensityOperator& rho0, const EvolutionConfig& cfg);

/// Per-trajectory observable, evaluated on the normalized conditional state
/// (or on its normalized projection when post-selecting).
using TrajectoryObservable = std::function<Eigen::VectorXd(double, const QuantumState&)>;

/// Dephasing channels: SignFlip uses sqrt(gamma/4)(2 n_i - 1), whose no-jump
/// decay is state independent; Projector uses sqrt(gamma) n_i. Both generate
/// the same dissipator.
enum class Unraveling { SignFlip, Projector };

struct TrajectoryRequest {
  TrajectoryObservable observable;
  Unraveling unraveling = Unraveling::SignFlip;
  /// Post-select on this exciton number. Estimates become ratios
  /// sum_k p_k f_k / sum_k p_k with delta-method standard errors.
  std::optional<int> post_select;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::VectorXd> std_error;
  /// Ensemble post-selection probability and its standard error per time;
  /// all ones when no post-selection was requested.
  std::vector<double> probability;
  std::vector<double> probability_error;
  int trajectory_count = 0;
  long jump_count = 0;
  std::vector<std::uint64_t> seeds;
};

/// Seed of trajectory k derived from the base seed.
std::uint64_t trajectory_seed(std::uint64_t base, std::uint64_t k);

/// Monte Carlo wave-function unraveling of the same master equation as
/// evolve_lindblad, using norm-threshold jump detection. Propagates with a
/// Chebyshev expansion when the no-jump decay is state independent and with
/// the Krylov engine otherwise.
TrajectoryResult evolve_trajectories(const HamiltonianHandle& h,
                                     const NoiseSpec& noise,
                                     const QuantumState& psi0,
                                     const EvolutionConfig& cfg,
                                     const TrajectoryRequest& request);

struct HrsState {
  int origin = 0;
  Eigen::MatrixXcd rho;
};

struct HrsResult {
  std::vector<double> times;
  std::vector<HrsState> states;
  std::vector<double> msd;  // sum_n (n - origin)^2 rho_nn
};

/// Single-exciton hopping with on-site dephasing on an open chain:
/// drho_mn/dt = -i sum_d J_d (rho_{m+d,n} + rho_{m-d,n} - rho_{m,n-d} - rho_{m,n+d})
///              - gamma (1 - delta_mn) rho_mn - kappa rho_mn.
/// hopping[d-1] holds J_d.
HrsResult evolve_hrs(const Eigen::VectorXd& hopping, double gamma, int n_sites,
                     int origin, const std::vector<double>& t_points,
                     double kappa = 0.0, double rel_tol = 1e-11,
                     double abs_tol = 1e-14);

/// Closed-form mean-square displacement of the infinite-chain HRS model.
double hrs_msd_closed_form(const Eigen::VectorXd& hopping, double gamma, double t);

}  // namespace rydex

#endif  // RYDEX_DYNAMICS_HPP
