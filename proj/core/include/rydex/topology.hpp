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

#ifndef RYDEX_TOPOLOGY_HPP
#define RYDEX_TOPOLOGY_HPP

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rydex/basis.hpp"
#include "rydex/hamiltonian.hpp"
#include "rydex/lattice.hpp"

namespace rydex {

/// Drive phase offsets of the three sublattices (A, B, C) = (+pi/4, 0, -pi/4).
double sublattice_offset(int sublattice);

/// Three-site-cell tight-binding coefficients at modulation phase phi. Site
/// energies drop the common detuning.
struct RiceMeleCoefficients {
  double phi = 0.0;
  double e = 0.0;        // Omega^2 / 2 Delta
  double u = 0.0;        // Omega^2 V(d) / 4 Delta (Delta + V(d))
  double u_prime = 0.0;  // same with V(2d); zero without the NNN extension
  double j_a = 0.0, j_b = 0.0, j_c = 0.0;
  double mu_a = 0.0, mu_b = 0.0, mu_c = 0.0;
  bool has_nnn = false;
  double jp_a = 0.0, jp_b = 0.0, jp_c = 0.0;
  double dmu_a = 0.0, dmu_b = 0.0, dmu_c = 0.0;
};

/// Closed-form coefficients. Passing v_nnn enables the next-nearest-neighbour
/// terms. The same validity and facilitation guards as derive_effective apply.
RiceMeleCoefficients rice_mele_coefficients(double omega, double delta, double v_nn,
                                            std::optional<double> v_nnn, double phi,
                                            const EffectiveOptions& guards = {});

/// 3x3 Bloch matrix in the (a_k, b_k, c_k) basis at quasi-momentum k l.
Eigen::Matrix3cd rice_mele_bloch(const RiceMeleCoefficients& c, double kl);

/// H(kl, phi) on the Brillouin-zone torus.
using BlochHamiltonian = std::function<Eigen::Matrix3cd(double kl, double phi)>;

BlochHamiltonian make_rice_mele_bloch(double omega, double delta, double v_nn,
                                      std::optional<double> v_nnn = std::nullopt);

struct ChernResult {
  std::vector<int> chern;         // bands in ascending energy
  std::vector<double> raw;        // unrounded plaquette sums
  std::vector<double> min_gap;    // smallest gap above band n, n = 0..B-2
};

/// Link-variable (plaquette) Chern numbers on an n_k x n_phi grid over
/// kl in [-pi, pi), phi in [-pi/2, pi/2). Throws DegenerateBandError when two
/// bands come closer than gap_tol somewhere on the grid.
ChernResult chern_numbers(const BlochHamiltonian& bloch, int n_k, int n_phi,
                          double gap_tol = 1e-9);

struct PumpSchedule {
  double period = 27.7;  // us
  double steepness = 5.6;

  TanhRamp ramp() const { return {period, steepness}; }
  double phase(double t) const { return ramp().phase(t); }
};

PumpSchedule pump_schedule(double period);

/// Omega_i(t) = Omega sin^2(phi(t) + offset(i mod 3)), constant Delta.
DressingProfile pump_dressing(int n_sites, double omega, double delta,
                              const PumpSchedule& schedule);

/// (c_j^+ + a_{j+1}^+)|0>/sqrt(2), i.e. sites 3j + 2 and 3j + 3 (mod N on a ring).
QuantumState pump_initial_state(BasisPtr basis, int unit, bool periodic = false);

}  // namespace rydex

#endif  // RYDEX_TOPOLOGY_HPP
