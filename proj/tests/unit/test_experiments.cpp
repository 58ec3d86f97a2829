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


#include <numbers>

#include <gtest/gtest.h>

#include "rydex/error.hpp"
#include "rydex/experiments.hpp"

namespace rydex {
namespace {

EngineSet effective_only() { return EngineSet{true, false, false}; }

TEST(Experiments, TransferDesignMeetsTargets) {
  const ChainSpec chain = ChainSpec::from_nn_shift(7, 4.4, 3.0 * angular_mhz(50.0));
  const double j = default_transfer_rate(chain, angular_mhz(5.0), angular_mhz(50.0));
  const double mu = default_transfer_mu(chain, angular_mhz(5.0), angular_mhz(50.0), {1, 0});
  const TransferDesign d = design_transfer_couplings(chain, j, mu);
  EXPECT_LE(d.exchange_residual, 1e-6);
  EXPECT_LE(d.onsite_residual, 1e-4);
  EXPECT_NEAR(d.transfer_time, std::numbers::pi / (2.0 * j), 1e-12);
}

TEST(Experiments, TransferIsSeedDeterministic) {
  TransferConfig cfg;
  cfg.engines = effective_only();
  cfg.ensemble = 16;
  cfg.sweep_ensemble = 8;
  cfg.sigma_sweep = {0.0, 0.1};
  cfg.n_outputs = 31;
  const ExperimentReport a = run_entanglement_transfer(cfg);
  cfg.threads = 2;
  const ExperimentReport b = run_entanglement_transfer(cfg);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t s = 0; s < a.series.size(); ++s)
    EXPECT_EQ(a.series[s].values, b.series[s].values) << a.series[s].name;
  ASSERT_EQ(a.ensembles.size(), b.ensembles.size());
  for (std::size_t s = 0; s < a.ensembles.size(); ++s)
    EXPECT_EQ(a.ensembles[s].mean.values, b.ensembles[s].mean.values);
}

TEST(Experiments, EffectivePumpMovesOneCellPerPeriod) {
  PumpConfig cfg;
  cfg.engines = effective_only();
  const ExperimentReport rep = run_thouless_pump(cfg);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.value;
  EXPECT_NE(rep.find_series("x_mean"), nullptr);
}

TEST(Experiments, ChernReportPasses) {
  ChernConfig cfg;
  cfg.grids = {24};
  EXPECT_TRUE(run_chern(cfg).passed());
}

TEST(Experiments, ValidationSuitePasses) {
  const ExperimentReport rep = run_validation_suite(3);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.value;
}

TEST(Experiments, ConfigErrorsAreReported) {
  PumpConfig pump;
  pump.n_sites = 10;
  EXPECT_THROW(run_thouless_pump(pump), ValidationError);
  TransferConfig transfer;
  transfer.n_atoms = 2;
  EXPECT_THROW(run_entanglement_transfer(transfer), ValidationError);
}

}  // namespace
}  // namespace rydex
