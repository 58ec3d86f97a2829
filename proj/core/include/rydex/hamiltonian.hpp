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

#ifndef RYDEX_HAMILTONIAN_HPP
#define RYDEX_HAMILTONIAN_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rydex/basis.hpp"
#include "rydex/lattice.hpp"

namespace rydex {

using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// H = sum_i (Omega_i/2) sigma_x^i + sum_i Delta_i n_i + sum_{i<j} V_ij n_i n_j
/// on the full 2^N basis.
struct ExactHamiltonian {
  BasisPtr basis;
  RealSparse matrix;
  Eigen::VectorXd rabi;      // Omega_i at `time`
  Eigen::VectorXd detuning;  // Delta_i at `time`
  double time = 0.0;
};

ExactHamiltonian build_exact(const ChainSpec& chain,
                             const DressingProfile& dressing, double t);

/// Re-evaluates the exact Hamiltonian at successive times without rebuilding
/// its sparsity pattern; only the drive amplitudes change between calls.
class ExactHamiltonianBuilder {
 public:
  ExactHamiltonianBuilder(ChainSpec chain, DressingProfile dressing);

  const RealSparse& at(double t);
  BasisPtr basis() const { return basis_; }
  bool time_dependent() const { return dressing_.time_dependent(); }

 private:
  ChainSpec chain_;
  DressingProfile dressing_;
  BasisPtr basis_;
  RealSparse matrix_;
  Eigen::VectorXd interaction_diagonal_;
  // For every stored entry, the site whose drive it carries (-1 on the diagonal).
  std::vector<int> entry_site_;
};

enum class GuardPolicy { Ignore, Warn, Error };

struct EffectiveOptions {
  /// Largest |i - j| kept for J_ij; 0 keeps every pair.
  int hopping_range = 0;
  /// Largest |i - j| kept for I_ij and U_ij; 0 keeps every pair.
  int interaction_range = 0;
  double validity_ratio = 0.25;     // Omega_i <= ratio * |Delta_i|
  double facilitation_ratio = 0.1;  // |Delta_b + V_ij| >= ratio * |Delta_b|
  GuardPolicy validity_policy = GuardPolicy::Warn;
  GuardPolicy facilitation_policy = GuardPolicy::Error;
};

/// Coefficients of the dressed tight-binding model
///   H' = sum_i mu_i n_i + sum_{i<j} J_ij (a_i^+ a_j + h.c.) + U_ij n_i n_j
/// plus the dimer-sector quantities, all at a fixed time.
struct EffectiveModel {
  int n_sites = 0;
  double time = 0.0;
  Eigen::VectorXd rabi;
  Eigen::VectorXd detuning;
  Eigen::VectorXd mu;
  Eigen::MatrixXd ising;                // I_ij, not symmetric
  Eigen::MatrixXd exchange;             // J_ij
  Eigen::MatrixXd exciton_interaction;  // U_ij
  Eigen::VectorXd dimer_exchange;       // J2_i couples (i,i+1) and (i+1,i+2)
  Eigen::VectorXd dimer_onsite;         // epsilon_i of the dimer (i,i+1)
  std::vector<std::string> warnings;
};

EffectiveModel derive_effective(const ChainSpec& chain,
                                const DressingProfile& dressing, double t,
                                const EffectiveOptions& options = {});

/// Single-term approximation of J2_i that keeps only the Delta_i path.
double dimer_exchange_single_term(const ChainSpec& chain,
                                  const Eigen::VectorXd& rabi,
                                  const Eigen::VectorXd& detuning, int i);

/// Matrix of the effective model over a basis. Excitation-number sectors and
/// the full basis use (mu, J, U); the dimer sector uses (epsilon, J2).
/// energy_shift is subtracted once per exciton; it commutes with every
/// number-conserving term and only removes a trivial phase.
RealSparse effective_operator(const EffectiveModel& model,
                              const SubspaceBasis& basis,
                              double energy_shift = 0.0);

/// Second-order quasi-degenerate (van Vleck) Hamiltonian of the exact model
/// restricted to a sector, evaluated numerically from H = H0 + V. Includes
/// the zeroth-order diagonal and drops the constant -sum_j Omega_j^2/4Delta_j.
/// Sector must be ExcitationNumber(1), ExcitationNumber(2) or Dimer.
Eigen::MatrixXd van_vleck_oracle(const ExactHamiltonian& exact, Sector sector,
                                 double singular_tol = 1e-9);

}  // namespace rydex

#endif  // RYDEX_HAMILTONIAN_HPP
