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

#include <cmath>
#include <complex>
#include <functional>

#include <gtest/gtest.h>

#include "rydex/error.hpp"
#include "rydex/observables.hpp"

namespace rydex {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(Observables, DensityAndG2OfBasisState) {
  const auto b = SubspaceBasis::get(5, Sector::excitation_number(2));
  const auto psi = QuantumState::basis_state(b, 0b01010);
  const VectorXd n = density_profile(psi);
  EXPECT_EQ(n, (VectorXd(5) << 0, 1, 0, 1, 0).finished());
  const MatrixXd g2 = g2_correlation(psi);
  EXPECT_DOUBLE_EQ(g2(1, 3), 1.0);
  EXPECT_DOUBLE_EQ(g2(3, 1), 1.0);
  EXPECT_DOUBLE_EQ(g2.sum(), 2.0);
  const VectorXd w = g2_diagonal_weights(g2);
  EXPECT_DOUBLE_EQ(w[2], 1.0);
  EXPECT_DOUBLE_EQ(w.sum(), 1.0);
}

TEST(Observables, G2NormalizationForPairStates) {
  // sum_{i != j} g2_ij = n (n - 1) for any n-exciton state.
  const auto b = SubspaceBasis::get(6, Sector::excitation_number(3));
  const auto psi = QuantumState::superposition(
      b, {{0b000111, 1.0}, {0b101010, {0.0, 2.0}}, {0b110001, -0.5}});
  EXPECT_NEAR(g2_correlation(psi).sum(), 6.0, 1e-13);
  EXPECT_NEAR(density_profile(psi).sum(), 3.0, 1e-13);
  const MatrixXd rho_g2 = g2_correlation(DensityOperator::pure(psi));
  EXPECT_LT((rho_g2 - g2_correlation(psi)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Observables, NormalizeToMax) {
  MatrixXd m(2, 2);
  m << 1, 4, 2, 0;
  EXPECT_DOUBLE_EQ(normalize_to_max(m).maxCoeff(), 1.0);
  EXPECT_EQ(normalize_to_max(MatrixXd::Zero(2, 2)), MatrixXd::Zero(2, 2));
}

TEST(Observables, ConcurrenceOfBellAndProductStates) {
  const auto b = SubspaceBasis::get(3, Sector::full());
  const auto bell = QuantumState::superposition(b, {{0b001, 1.0}, {0b100, {0.0, 1.0}}});
  EXPECT_NEAR(concurrence(reduced_two_site(bell, 0, 2)), 1.0, 1e-12);
  EXPECT_NEAR(concurrence(reduced_two_site(bell, 0, 1)), 0.0, 1e-12);
  const auto product = QuantumState::superposition(b, {{0b000, 1.0}, {0b001, 1.0}});
  EXPECT_NEAR(concurrence(reduced_two_site(product, 0, 2)), 0.0, 1e-12);
  // Partially entangled: a|01> + b|10> has C = 2|ab|.
  const auto partial = QuantumState::superposition(b, {{0b001, 0.6}, {0b100, 0.8}});
  EXPECT_NEAR(concurrence(reduced_two_site(partial, 0, 2)), 0.96, 1e-12);
  EXPECT_NEAR(concurrence(reduced_two_site(DensityOperator::pure(partial), 0, 2)), 0.96, 1e-12);
}

TEST(Observables, ReducedStateIsNormalized) {
  const auto b = SubspaceBasis::get(4, Sector::full());
  const auto psi =
      QuantumState::superposition(b, {{0b0001, 1.0}, {0b0110, 0.5}, {0b1111, {0.0, 0.3}}});
  const Eigen::Matrix4cd r = reduced_two_site(psi, 1, 3);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-14);
  EXPECT_LT((r - r.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Observables, TransferFidelity) {
  const auto b = SubspaceBasis::get(3, Sector::excitation_number(1));
  const auto target = QuantumState::basis_state(b, 0b100);
  const auto psi = QuantumState::superposition(b, {{0b001, 1.0}, {0b100, 1.0}});
  EXPECT_NEAR(transfer_fidelity(psi, target), 0.5, 1e-15);
  EXPECT_NEAR(transfer_fidelity(DensityOperator::pure(psi), target), 0.5, 1e-15);
}

TEST(Observables, DisplacementMoments) {
  VectorXd p = VectorXd::Zero(9);
  p[4] = 0.5;
  p[7] = 0.5;
  const DisplacementStats s = displacement_stats({p}, 4.0, 3.0);
  EXPECT_NEAR(s.mean[0], 0.5, 1e-15);
  EXPECT_NEAR(s.mean_square[0], 0.5, 1e-15);
}

TEST(Observables, TrackedDisplacementUnwrapsRing) {
  // A packet walking right around a 6-site ring.
  std::vector<VectorXd> profiles;
  for (int k = 0; k <= 8; ++k) {
    VectorXd p = VectorXd::Zero(6);
    p[k % 6] = 1.0;
    profiles.push_back(p);
  }
  const DisplacementStats s = tracked_displacement(profiles, 0.0);
  EXPECT_NEAR(s.mean.back(), 8.0, 1e-12);
}

MatrixXd pair_g2_from_profile(int n, const std::function<double(double)>& f) {
  // Pairs (c - 1, c + 1) with weight f(c).
  MatrixXd g2 = MatrixXd::Zero(n, n);
  for (int c = 1; c + 1 < n; ++c) {
    g2(c - 1, c + 1) = f(c);
    g2(c + 1, c - 1) = f(c);
  }
  return g2;
}

TEST(Observables, ComFitPrefersGeneratingFamily) {
  const int n = 21;
  const double center = 10.0;
  const MatrixXd bessel = pair_g2_from_profile(
      n, [&](double x) { return bessel_profile(x, center, 1.0, 3.0); });
  const ComDistribution cb = com_distribution(bessel, center);
  ASSERT_TRUE(cb.bessel.fitted && cb.gaussian.fitted);
  EXPECT_LT(cb.bessel.ssr, cb.gaussian.ssr);
  EXPECT_NEAR(cb.bessel.params[1], 3.0, 1e-4);
  EXPECT_NEAR(cb.probability.sum(), 1.0, 1e-12);

  const MatrixXd gauss = pair_g2_from_profile(
      n, [&](double x) { return std::exp(-0.5 * std::pow((x - center) / 2.0, 2)); });
  const ComDistribution cg = com_distribution(gauss, center);
  ASSERT_TRUE(cg.bessel.fitted && cg.gaussian.fitted);
  EXPECT_LT(cg.gaussian.ssr, cg.bessel.ssr);
  EXPECT_NEAR(cg.gaussian.params[2], 2.0, 1e-4);
  EXPECT_NEAR(cg.off_lattice, 0.0, 1e-15);
}

}  // namespace
}  // namespace rydex
