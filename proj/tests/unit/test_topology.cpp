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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "rydex/error.hpp"
#include "rydex/topology.hpp"

namespace rydex {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kOmega = angular_mhz(5.0);
constexpr double kDelta = angular_mhz(20.0);

TEST(Topology, ChernNumbersOfThreeBandModel) {
  const auto bloch = make_rice_mele_bloch(kOmega, kDelta, 3 * kDelta);
  for (const int n : {32, 64}) {
    const ChernResult r = chern_numbers(bloch, n, n);
    EXPECT_EQ(r.chern, (std::vector<int>{1, -2, 1})) << n;
    for (std::size_t b = 0; b < r.raw.size(); ++b)
      EXPECT_NEAR(r.raw[b], r.chern[b], 1e-6);
    for (const double g : r.min_gap) EXPECT_GT(g, 0.0);
  }
}

TEST(Topology, ChernSumRuleWithNextNearestTerms) {
  const double v = 3 * kDelta;
  const auto bloch = make_rice_mele_bloch(kOmega, kDelta, v, v / 64.0);
  const ChernResult r = chern_numbers(bloch, 48, 48);
  int sum = 0;
  for (const int c : r.chern) sum += c;
  EXPECT_EQ(sum, 0);
}

TEST(Topology, BlochMatrixIsHermitianAndPeriodic) {
  const RiceMeleCoefficients c = rice_mele_coefficients(kOmega, kDelta, 3 * kDelta, {}, 0.4);
  for (const double k : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
    const Eigen::Matrix3cd h = rice_mele_bloch(c, k);
    EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((h - rice_mele_bloch(c, k + 2 * std::numbers::pi)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Topology, BlochSpectrumMatchesRing) {
  // Single-exciton block of a 12-site ring (4 cells) with NN couplings equals
  // the Bloch bands at k l = 2 pi m / 4 up to a common shift.
  const int cells = 4, n = 3 * cells;
  const double phi = 0.3;
  const auto chain = ChainSpec::from_nn_shift(n, 4.4, 3 * kDelta, 0.0, Boundary::Periodic);
  VectorXd rabi(n);
  for (int i = 0; i < n; ++i)
    rabi[i] = kOmega * std::pow(std::sin(phi + sublattice_offset(i % 3)), 2);
  EffectiveOptions nn;
  nn.hopping_range = 1;
  nn.interaction_range = 1;
  const EffectiveModel m = derive_effective(
      chain, DressingProfile::from_values(rabi, VectorXd::Constant(n, kDelta)), 0.0, nn);
  const MatrixXd h(effective_operator(m, *SubspaceBasis::get(n, Sector::excitation_number(1))));
  VectorXd ring = Eigen::SelfAdjointEigenSolver<MatrixXd>(h).eigenvalues();

  const RiceMeleCoefficients c = rice_mele_coefficients(kOmega, kDelta, 3 * kDelta, {}, phi);
  std::vector<double> bands;
  for (int q = 0; q < cells; ++q) {
    const double k = 2 * std::numbers::pi * q / cells;
    const Eigen::Vector3d e = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(
                                  rice_mele_bloch(c, k)).eigenvalues();
    bands.insert(bands.end(), e.data(), e.data() + 3);
  }
  std::sort(bands.begin(), bands.end());
  const VectorXd bloch = Eigen::Map<VectorXd>(bands.data(), n);
  ring.array() -= ring.mean();
  const VectorXd shifted = bloch.array() - bloch.mean();
  EXPECT_LT((ring - shifted).cwiseAbs().maxCoeff(), 1e-9 * ring.cwiseAbs().maxCoeff());
}

TEST(Topology, PumpScheduleEndpoints) {
  const PumpSchedule s = pump_schedule(27.7);
  const DressingProfile d = pump_dressing(6, kOmega, kDelta, s);
  EXPECT_TRUE(d.time_dependent());
  const VectorXd start = d.rabi_at(0.0);
  const VectorXd end = d.rabi_at(27.7);
  EXPECT_LT((start - end).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(start[1], 0.0, 1e-12);  // sublattice B has zero offset
  EXPECT_NEAR(start[0], 0.5 * kOmega, 1e-12);
  EXPECT_NEAR(d.detuning_at(3.0)[2], kDelta, 0.0);
}

TEST(Topology, PumpInitialStateSpansTwoSites) {
  const auto b = SubspaceBasis::get(12, Sector::excitation_number(1));
  const QuantumState psi = pump_initial_state(b, 1, true);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::norm(psi.amplitudes[b->index(Config{1} << 5)]), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(psi.amplitudes[b->index(Config{1} << 6)]), 0.5, 1e-15);
  const QuantumState wrap = pump_initial_state(b, 3, true);
  EXPECT_NEAR(std::norm(wrap.amplitudes[b->index(Config{1} << 0)]), 0.5, 1e-15);
}

TEST(Topology, DegenerateBandsReported) {
  const BlochHamiltonian flat = [](double, double) { return Eigen::Matrix3cd::Zero().eval(); };
  EXPECT_THROW(chern_numbers(flat, 8, 8), DegenerateBandError);
}

}  // namespace
}  // namespace rydex
