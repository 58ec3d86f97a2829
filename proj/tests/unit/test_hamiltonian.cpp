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
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "rydex/error.hpp"
#include "rydex/hamiltonian.hpp"

namespace rydex {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(Hamiltonian, ExactMatrixShape) {
  const int n = 5;
  const auto chain = ChainSpec::from_nn_shift(n, 4.4, angular_mhz(150));
  const auto dressing = DressingProfile::homogeneous(n, angular_mhz(5), angular_mhz(50));
  const ExactHamiltonian h = build_exact(chain, dressing, 0.0);
  ASSERT_EQ(h.matrix.rows(), 32);
  const MatrixXd dense(h.matrix);
  EXPECT_EQ((dense - dense.transpose()).cwiseAbs().maxCoeff(), 0.0);
  // Diagonal: sum of detunings plus pair shifts; drives couple single flips.
  const auto& basis = *h.basis;
  const Config c = 0b00011;
  const auto k = static_cast<Eigen::Index>(basis.index(c));
  EXPECT_NEAR(dense(k, k), 2 * angular_mhz(50) + angular_mhz(150), 1e-9);
  const auto m = static_cast<Eigen::Index>(basis.index(0b00001));
  EXPECT_NEAR(dense(k, m), 0.5 * angular_mhz(5), 1e-12);
}

TEST(Hamiltonian, HomogeneousExchangeValue) {
  const double om = angular_mhz(5), de = angular_mhz(50);
  const auto chain = ChainSpec::from_nn_shift(4, 4.4, 3 * de);
  const EffectiveModel m =
      derive_effective(chain, DressingProfile::homogeneous(4, om, de), 0.0);
  EXPECT_NEAR(m.exchange(1, 2), angular_mhz(0.09375), 1e-12);
  EXPECT_NEAR(m.exchange(1, 2), m.exchange(2, 1), 1e-15);
  // Two-path form: Omega^2/4Delta - Omega^2/4(Delta + V).
  EXPECT_NEAR(m.exchange(0, 1), om * om / (4 * de) - om * om / (4 * (de + 3 * de)), 1e-12);
}

TEST(Hamiltonian, TwoAtomSplittingMatchesExchange) {
  // Half the splitting of the two middle levels of the exact 4x4 matrix.
  const double om = angular_mhz(5), de = angular_mhz(50);
  const auto chain = ChainSpec::from_nn_shift(2, 4.4, 3 * de);
  const auto dressing = DressingProfile::homogeneous(2, om, de);
  const ExactHamiltonian h = build_exact(chain, dressing, 0.0);
  const VectorXd e = Eigen::SelfAdjointEigenSolver<MatrixXd>(MatrixXd(h.matrix)).eigenvalues();
  const double j = derive_effective(chain, dressing, 0.0).exchange(0, 1);
  EXPECT_NEAR(0.5 * (e[2] - e[1]) / j, 1.0, 3.0 * std::pow(om / de, 2));
}

TEST(Hamiltonian, OracleMatchesSingleExcitonBlock) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    VectorXd om(n), de(n);
    for (int i = 0; i < n; ++i) {
      de[i] = angular_mhz(40.0 + 20.0 * u(rng));
      om[i] = de[i] / (8.0 + 10.0 * u(rng));
    }
    const auto chain = ChainSpec::from_nn_shift(n, 4.4, angular_mhz(40.0 + 200.0 * u(rng)));
    const auto dressing = DressingProfile::from_values(om, de);
    const ExactHamiltonian h = build_exact(chain, dressing, 0.0);
    const EffectiveModel m = derive_effective(chain, dressing, 0.0);
    const auto basis = SubspaceBasis::get(n, Sector::excitation_number(1));
    const MatrixXd eff(effective_operator(m, *basis));
    const MatrixXd oracle = van_vleck_oracle(h, Sector::excitation_number(1));
    EXPECT_LT((eff - oracle).cwiseAbs().maxCoeff(), 1e-12 * oracle.cwiseAbs().maxCoeff())
        << "trial " << trial;
  }
}

TEST(Hamiltonian, OracleMatchesPairOnTwoSites) {
  const double de = angular_mhz(50);
  const auto chain = ChainSpec::from_nn_shift(2, 4.4, 3 * de);
  const auto dressing = DressingProfile::homogeneous(2, angular_mhz(5), de);
  const EffectiveModel m = derive_effective(chain, dressing, 0.0);
  const MatrixXd eff(effective_operator(m, *SubspaceBasis::get(2, Sector::excitation_number(2))));
  const MatrixXd oracle =
      van_vleck_oracle(build_exact(chain, dressing, 0.0), Sector::excitation_number(2));
  EXPECT_NEAR(eff(0, 0), oracle(0, 0), 1e-12 * std::abs(oracle(0, 0)));
}

TEST(Hamiltonian, SeparatedPairCarriesTwoBodyApproximation) {
  // Pair (1, 3) on four sites: diagonal is mu_1 + mu_3 + U_13 up to the
  // three-body remainder of order Omega^2 V^2 / Delta^3.
  const double om = angular_mhz(5), de = angular_mhz(50), v = 3 * de;
  const auto chain = ChainSpec::from_nn_shift(4, 4.4, v);
  const auto dressing = DressingProfile::homogeneous(4, om, de);
  const EffectiveModel m = derive_effective(chain, dressing, 0.0);
  const auto basis = SubspaceBasis::get(4, Sector::excitation_number(2));
  const MatrixXd oracle =
      van_vleck_oracle(build_exact(chain, dressing, 0.0), Sector::excitation_number(2));
  const auto k = static_cast<Eigen::Index>(basis->index(0b1010));
  const double closed = m.mu[1] + m.mu[3] + m.exciton_interaction(1, 3);
  EXPECT_NEAR(oracle(k, k), closed, om * om * v * v / std::pow(de, 3));
}

TEST(Hamiltonian, EffectiveOperatorsAreSymmetric) {
  const int n = 6;
  const double de = angular_mhz(30);
  const auto chain = ChainSpec::from_nn_shift(n, 4.4, 3 * de, 0.0, Boundary::Periodic);
  const EffectiveModel m =
      derive_effective(chain, DressingProfile::homogeneous(n, angular_mhz(5), de), 0.0);
  for (const Sector s : {Sector::excitation_number(1), Sector::excitation_number(2),
                         Sector::excitation_number(3), Sector::dimer()}) {
    const MatrixXd h(effective_operator(m, *SubspaceBasis::get(n, s)));
    EXPECT_EQ((h - h.transpose()).cwiseAbs().maxCoeff(), 0.0) << s.name();
  }
}

TEST(Hamiltonian, EnergyShiftMovesDiagonalPerExciton) {
  const int n = 4;
  const double de = angular_mhz(50);
  const auto chain = ChainSpec::from_nn_shift(n, 4.4, 3 * de);
  const EffectiveModel m =
      derive_effective(chain, DressingProfile::homogeneous(n, angular_mhz(5), de), 0.0);
  const auto basis = SubspaceBasis::get(n, Sector::excitation_number(2));
  const MatrixXd a(effective_operator(m, *basis));
  const MatrixXd b(effective_operator(m, *basis, de));
  EXPECT_LT((a - b - 2 * de * MatrixXd::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff(),
            1e-9);
}

TEST(Hamiltonian, FacilitationGuard) {
  const double de = angular_mhz(50);
  const auto chain = ChainSpec::from_nn_shift(3, 4.4, -1.02 * de);
  const auto dressing = DressingProfile::homogeneous(3, angular_mhz(5), de);
  EXPECT_THROW(derive_effective(chain, dressing, 0.0), FacilitationResonanceError);
  EffectiveOptions warn;
  warn.facilitation_policy = GuardPolicy::Warn;
  EXPECT_FALSE(derive_effective(chain, dressing, 0.0, warn).warnings.empty());
}

TEST(Hamiltonian, ValidityGuardWarns) {
  const auto chain = ChainSpec::from_nn_shift(3, 4.4, angular_mhz(100));
  const auto dressing = DressingProfile::homogeneous(3, angular_mhz(20), angular_mhz(40));
  EXPECT_FALSE(derive_effective(chain, dressing, 0.0).warnings.empty());
  EffectiveOptions strict;
  strict.validity_policy = GuardPolicy::Error;
  EXPECT_THROW(derive_effective(chain, dressing, 0.0, strict), LargeDetuningError);
}

TEST(Hamiltonian, HoppingRangeTruncates) {
  const auto chain = ChainSpec::from_nn_shift(6, 4.4, angular_mhz(150));
  const auto dressing = DressingProfile::homogeneous(6, angular_mhz(5), angular_mhz(50));
  EffectiveOptions nn;
  nn.hopping_range = 1;
  const EffectiveModel m = derive_effective(chain, dressing, 0.0, nn);
  EXPECT_NE(m.exchange(0, 1), 0.0);
  EXPECT_EQ(m.exchange(0, 2), 0.0);
}

TEST(Hamiltonian, DimerSingleTermIsHalfTheSymmetricForm) {
  // With homogeneous parameters the two paths coincide.
  const double de = angular_mhz(-400);
  const auto chain = ChainSpec::from_nn_shift(5, 4.4, -1.1 * de);
  const auto dressing = DressingProfile::homogeneous(5, angular_mhz(5), de);
  const EffectiveModel m = derive_effective(chain, dressing, 0.0);
  const double single = dimer_exchange_single_term(chain, m.rabi, m.detuning, 1);
  EXPECT_NEAR(m.dimer_exchange[1], single, 1e-12 * std::abs(single));
}

}  // namespace
}  // namespace rydex
