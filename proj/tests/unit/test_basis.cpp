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

#include <complex>

#include <gtest/gtest.h>

#include "rydex/basis.hpp"
#include "rydex/error.hpp"

namespace rydex {
namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(Basis, SectorDimensions) {
  for (int n = 1; n <= 10; ++n) {
    EXPECT_EQ(SubspaceBasis::get(n, Sector::full())->dim(), std::size_t{1} << n);
    for (int k = 0; k <= n; ++k)
      EXPECT_EQ(SubspaceBasis::get(n, Sector::excitation_number(k))->dim(),
                static_cast<std::size_t>(binomial(n, k)));
  }
  EXPECT_EQ(SubspaceBasis::get(7, Sector::dimer())->dim(), 6u);
}

TEST(Basis, IndexRoundTrip) {
  const auto b = SubspaceBasis::get(9, Sector::excitation_number(3));
  for (std::size_t k = 0; k < b->dim(); ++k) {
    EXPECT_EQ(excitation_count(b->state(k)), 3);
    EXPECT_EQ(b->index(b->state(k)), k);
  }
  EXPECT_EQ(b->index(Config{1}), SubspaceBasis::npos);
}

TEST(Basis, CachedInstancesShared) {
  EXPECT_EQ(SubspaceBasis::get(6, Sector::excitation_number(2)),
            SubspaceBasis::get(6, Sector::excitation_number(2)));
}

TEST(Basis, EmbedKeepsSectorAmplitudes) {
  const auto full = SubspaceBasis::get(4, Sector::full());
  const auto one = SubspaceBasis::get(4, Sector::excitation_number(1));
  const QuantumState psi =
      QuantumState::superposition(full, {{0b0001, 1.0}, {0b0010, {0.0, 1.0}}, {0b0011, 1.0}});
  const QuantumState e = psi.embed(one);
  EXPECT_NEAR(std::norm(e.amplitudes[one->index(0b0001)]), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::norm(e.amplitudes[one->index(0b0010)]), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.norm() * e.norm(), 2.0 / 3.0, 1e-15);
}

TEST(Basis, ProjectionIsIdempotent) {
  const auto full = SubspaceBasis::get(3, Sector::full());
  const QuantumState psi = QuantumState::superposition(
      full, {{0b000, 0.3}, {0b001, 0.5}, {0b010, {0.0, 0.4}}, {0b011, 0.6}, {0b110, 0.2}});
  for (const auto mode : {ProjectionMode::Diagonal, ProjectionMode::Coherent}) {
    const Projection p = project_to_sector(psi, 2, mode);
    const Projection pp = project_to_sector(p.rho, 2, mode);
    EXPECT_NEAR(pp.probability, 1.0, 1e-14);
    EXPECT_LT((pp.rho.matrix - p.rho.matrix).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(p.rho.trace().real(), 1.0, 1e-14);
  }
}

TEST(Basis, SectorProbabilitiesSumToOne) {
  const auto full = SubspaceBasis::get(3, Sector::full());
  const QuantumState psi =
      QuantumState::superposition(full, {{0b000, 1.0}, {0b001, 1.0}, {0b111, 1.0}});
  const Eigen::VectorXd p = sector_probabilities(psi);
  ASSERT_EQ(p.size(), 4);
  EXPECT_NEAR(p[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  EXPECT_NEAR((sector_probabilities(DensityOperator::pure(psi)) - p).norm(), 0.0, 1e-15);
}

TEST(Basis, EmptyPostSelectionThrows) {
  const auto full = SubspaceBasis::get(3, Sector::full());
  const QuantumState psi = QuantumState::basis_state(full, 0b001);
  EXPECT_THROW(project_to_sector(psi, 2), EmptyPostSelectionError);
}

TEST(Basis, DensityOperatorIsHermitian) {
  const auto full = SubspaceBasis::get(2, Sector::full());
  const QuantumState psi =
      QuantumState::superposition(full, {{0b01, {1.0, 0.5}}, {0b10, {0.0, -1.0}}});
  const DensityOperator rho = DensityOperator::pure(psi);
  EXPECT_LT(rho.hermiticity_error(), 1e-15);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
}

}  // namespace
}  // namespace rydex
