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

#include "rydex/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rydex/error.hpp"

namespace rydex {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double sublattice_offset(int sublattice) {
  switch (((sublattice % 3) + 3) % 3) {
    case 0:
      return 0.25 * kPi;
    case 1:
      return 0.0;
    default:
      return -0.25 * kPi;
  }
}

namespace {

double s2(double x) {
  const double s = std::sin(x);
  return s * s;
}

double pair_strength(double omega, double delta, double v) {
  return omega * omega * v / (4.0 * delta * (delta + v));
}

void guard(double omega, double delta, double v, const EffectiveOptions& g,
           const std::string& what) {
  if (g.validity_policy == GuardPolicy::Error &&
      omega > g.validity_ratio * std::abs(delta) * (1 + 1e-9))
    throw LargeDetuningError("large-detuning condition violated for the Rice-Mele model");
  if (g.facilitation_policy == GuardPolicy::Error &&
      std::abs(delta + v) * (1 + 1e-9) < g.facilitation_ratio * std::abs(delta))
    throw FacilitationResonanceError("facilitation resonance at " + what, 0,
                                     what == "V(d)" ? 1 : 2);
}

}  // namespace

RiceMeleCoefficients rice_mele_coefficients(double omega, double delta, double v_nn,
                                            std::optional<double> v_nnn, double phi,
                                            const EffectiveOptions& guards) {
  if (delta == 0.0) throw ValidationError("detuning must be non-zero");
  if (omega < 0.0) throw ValidationError("Rabi frequency must be non-negative");
  guard(omega, delta, v_nn, guards, "V(d)");
  RiceMeleCoefficients c;
  c.phi = phi;
  c.e = omega * omega / (2.0 * delta);
  c.u = pair_strength(omega, delta, v_nn);
  const double sa = s2(phi + 0.25 * kPi);
  const double sb = s2(phi);
  const double sc = s2(phi - 0.25 * kPi);
  c.j_a = c.u * sa * sb;
  c.j_b = c.u * sb * sc;
  c.j_c = c.u * sc * sa;
  c.mu_a = c.e * sa * sa + c.u * (sb * sb + sc * sc);
  c.mu_b = c.e * sb * sb + c.u * (sc * sc + sa * sa);
  c.mu_c = c.e * sc * sc + c.u * (sa * sa + sb * sb);
  if (v_nnn) {
    guard(omega, delta, *v_nnn, guards, "V(2d)");
    c.has_nnn = true;
    c.u_prime = pair_strength(omega, delta, *v_nnn);
    // Distance-2 partners: A_j-C_j inside the cell, B_j-A_{j+1} and C_j-B_{j+1} across.
    c.jp_a = c.u_prime * sa * sc;
    c.jp_b = c.u_prime * sb * sa;
    c.jp_c = c.u_prime * sc * sb;
    c.dmu_a = c.u_prime * (sc * sc + sb * sb);
    c.dmu_b = c.u_prime * (sa * sa + sc * sc);
    c.dmu_c = c.u_prime * (sb * sb + sa * sa);
  }
  return c;
}

Eigen::Matrix3cd rice_mele_bloch(const RiceMeleCoefficients& c, double kl) {
  const cplx back = std::exp(cplx(0.0, -kl));
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 0) = c.mu_a + c.dmu_a;
  h(1, 1) = c.mu_b + c.dmu_b;
  h(2, 2) = c.mu_c + c.dmu_c;
  h(0, 1) = c.j_a + c.jp_b * back;
  h(1, 2) = c.j_b + c.jp_c * back;
  h(0, 2) = c.j_c * back + c.jp_a;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = std::conj(h(1, 2));
  h(2, 0) = std::conj(h(0, 2));
  return h;
}

BlochHamiltonian make_rice_mele_bloch(double omega, double delta, double v_nn,
                                      std::optional<double> v_nnn) {
  return [=](double kl, double phi) {
    return rice_mele_bloch(rice_mele_coefficients(omega, delta, v_nn, v_nnn, phi), kl);
  };
}

ChernResult chern_numbers(const BlochHamiltonian& bloch, int n_k, int n_phi, double gap_tol) {
  if (n_k < 2 || n_phi < 2) throw ValidationError("Chern grid needs at least 2x2 points");
  const int bands = 3;
  // u[(ik * n_phi + ip)] holds the eigenvectors at one grid point.
  std::vector<Eigen::Matrix3cd> u(static_cast<std::size_t>(n_k) * n_phi);
  ChernResult out;
  out.min_gap.assign(bands - 1, std::numeric_limits<double>::infinity());
  for (int ik = 0; ik < n_k; ++ik) {
    for (int ip = 0; ip < n_phi; ++ip) {
      const double kl = -kPi + 2.0 * kPi * ik / n_k;
      const double phi = -0.5 * kPi + kPi * ip / n_phi;
      const Eigen::Matrix3cd h = bloch(kl, phi);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
      const Eigen::Vector3d e = es.eigenvalues();
      const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
      for (int b = 0; b + 1 < bands; ++b) {
        const double gap = e[b + 1] - e[b];
        out.min_gap[b] = std::min(out.min_gap[b], gap);
        if (gap < gap_tol * scale) {
          std::ostringstream msg;
          msg << "bands " << b << " and " << b + 1 << " touch at grid point (" << ik << ", " << ip
              << ")";
          throw DegenerateBandError(msg.str(), ik, ip);
        }
      }
      u[static_cast<std::size_t>(ik) * n_phi + ip] = es.eigenvectors();
    }
  }
  auto at = [&](int ik, int ip) -> const Eigen::Matrix3cd& {
    return u[static_cast<std::size_t>((ik + n_k) % n_k) * n_phi + (ip + n_phi) % n_phi];
  };
  for (int b = 0; b < bands; ++b) {
    double flux = 0.0;
    for (int ik = 0; ik < n_k; ++ik) {
      for (int ip = 0; ip < n_phi; ++ip) {
        const auto v00 = at(ik, ip).col(b);
        const auto v10 = at(ik + 1, ip).col(b);
        const auto v11 = at(ik + 1, ip + 1).col(b);
        const auto v01 = at(ik, ip + 1).col(b);
        const cplx loop = v00.dot(v10) * v10.dot(v11) * v11.dot(v01) * v01.dot(v00);
        flux += std::arg(loop);
      }
    }
    const double raw = flux / (2.0 * kPi);
    out.raw.push_back(raw);
    out.chern.push_back(static_cast<int>(std::lround(raw)));
  }
  return out;
}

PumpSchedule pump_schedule(double period) {
  if (!(period > 0.0)) throw ValidationError("pump period must be positive");
  return PumpSchedule{period, 5.6};
}

DressingProfile pump_dressing(int n_sites, double omega, double delta,
                              const PumpSchedule& schedule) {
  if (n_sites % 3 != 0) throw ValidationError("pump chain length must be a multiple of 3");
  DressingProfile p;
  for (int i = 0; i < n_sites; ++i) {
    p.rabi.push_back(Schedule::sin2_ramp(omega, sublattice_offset(i), schedule.ramp()));
    p.detuning.push_back(Schedule::constant(delta));
  }
  return p;
}

QuantumState pump_initial_state(BasisPtr basis, int unit, bool periodic) {
  const int n = basis->n_sites();
  int c_site = 3 * unit + 2;
  int a_site = 3 * unit + 3;
  if (periodic) {
    c_site = ((c_site % n) + n) % n;
    a_site = ((a_site % n) + n) % n;
  }
  if (c_site < 0 || a_site >= n || unit < 0)
    throw ValidationError("pump unit " + std::to_string(unit) + " has no right neighbour cell");
  const double r = 1.0 / std::sqrt(2.0);
  return QuantumState::superposition(basis, {{Config{1} << c_site, r}, {Config{1} << a_site, r}});
}

}  // namespace rydex
