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
#include <numbers>

#include <gtest/gtest.h>

#include "rydex/error.hpp"
#include "rydex/lattice.hpp"

namespace rydex {
namespace {

TEST(Lattice, NearestNeighbourShiftFixesC6) {
  const double v = angular_mhz(150.0);
  const ChainSpec chain = ChainSpec::from_nn_shift(5, 4.4, v);
  EXPECT_NEAR(vdw_interaction(chain, 0, 1), v, 1e-12 * v);
  EXPECT_NEAR(vdw_interaction(chain, 1, 3), v / 64.0, 1e-12 * v);
  EXPECT_DOUBLE_EQ(vdw_interaction(chain, 3, 1), vdw_interaction(chain, 1, 3));
}

TEST(Lattice, SelfInteractionRejected) {
  const ChainSpec chain = ChainSpec::from_nn_shift(3, 4.4, 1.0);
  EXPECT_THROW(vdw_interaction(chain, 1, 1), InvalidPairError);
  EXPECT_THROW(vdw_interaction(chain, 0, 3), InvalidPairError);
}

TEST(Lattice, RingUsesMinimalImage) {
  const ChainSpec ring = ChainSpec::uniform(6, 2.0, 1.0, 0.0, Boundary::Periodic);
  EXPECT_DOUBLE_EQ(ring.separation(0, 5), 2.0);
  EXPECT_EQ(ring.index_distance(0, 5), 1);
  EXPECT_EQ(ring.index_distance(0, 3), 3);
  const ChainSpec open = ChainSpec::uniform(6, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(open.separation(0, 5), 10.0);
  EXPECT_EQ(open.index_distance(0, 5), 5);
}

TEST(Lattice, InvalidChainsRejected) {
  EXPECT_THROW(ChainSpec::uniform(0, 4.4, 1.0).validate(), ValidationError);
  EXPECT_THROW(ChainSpec::uniform(3, -1.0, 1.0).validate(), ValidationError);
  EXPECT_THROW(ChainSpec::uniform(3, 4.4, 1.0, -0.1).validate(), ValidationError);
  EXPECT_THROW((NoiseSpec{-0.1, 0.0}.validate()), ValidationError);
}

TEST(Lattice, DisorderIsSeededAndOrdered) {
  const ChainSpec base = ChainSpec::uniform(8, 4.4, 1.0, 0.3);
  const ChainSpec a = sample_disorder(base, 11);
  const ChainSpec b = sample_disorder(base, 11);
  const ChainSpec c = sample_disorder(base, 12);
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_NE(a.positions, c.positions);
  for (int i = 1; i < a.n_sites; ++i) EXPECT_GT(a.positions[i], a.positions[i - 1]);
}

TEST(Lattice, ZeroSigmaLeavesPositions) {
  const ChainSpec base = ChainSpec::uniform(5, 4.4, 1.0);
  EXPECT_EQ(sample_disorder(base, 3).positions, base.positions);
}

TEST(Lattice, DisorderStatisticsMatchSigma) {
  // Sample standard deviation of the displacement over many draws.
  const ChainSpec base = ChainSpec::uniform(4, 4.4, 1.0, 0.1);
  double sum = 0.0, sum2 = 0.0;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    const double dx = sample_disorder(base, k).positions[2] - base.positions[2];
    sum += dx;
    sum2 += dx * dx;
  }
  const double mean = sum / draws;
  EXPECT_NEAR(mean, 0.0, 5.0 * 0.1 / std::sqrt(draws));
  EXPECT_NEAR(std::sqrt(sum2 / draws - mean * mean), 0.1, 0.003);
}

TEST(Lattice, TanhRampEndpoints) {
  const TanhRamp ramp{27.7, 5.6};
  EXPECT_NEAR(ramp.phase(0.0), 0.0, 1e-14);
  EXPECT_NEAR(ramp.phase(27.7), std::numbers::pi, 1e-14);
  EXPECT_NEAR(ramp.phase(13.85), 0.5 * std::numbers::pi, 1e-14);
  double prev = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double p = ramp.phase(27.7 * k / 100.0);
    EXPECT_GT(p, prev);
    prev = p;
  }
}

TEST(Lattice, Sin2ScheduleValues) {
  const Schedule s = Schedule::sin2_ramp(2.0, std::numbers::pi / 3.0, TanhRamp{10.0, 5.6});
  EXPECT_NEAR(s(0.0), 2.0 * std::pow(std::sin(std::numbers::pi / 3.0), 2), 1e-14);
  EXPECT_NEAR(s(10.0), s(0.0), 1e-13);
  EXPECT_FALSE(s.is_constant());
  EXPECT_DOUBLE_EQ(Schedule::constant(3.5)(7.0), 3.5);
}

TEST(Lattice, DressingValidation) {
  const DressingProfile ok = DressingProfile::homogeneous(3, 1.0, 10.0);
  EXPECT_NO_THROW(ok.validate(0.0));
  EXPECT_FALSE(ok.time_dependent());
  EXPECT_THROW(DressingProfile::homogeneous(3, 1.0, 0.0).validate(0.0), ValidationError);
  EXPECT_THROW(DressingProfile::homogeneous(3, -1.0, 10.0).validate(0.0), ValidationError);
}

}  // namespace
}  // namespace rydex
