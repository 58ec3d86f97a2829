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
#include <string>

#include <gtest/gtest.h>

#include "config.hpp"
#include "run.hpp"
#include "rydex/error.hpp"

namespace rydex::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int parse_error_line(const std::string& text, std::optional<Experiment> e = std::nullopt) {
  try {
    parse_config_text(text, e);
  } catch (const ParseError& err) {
    return err.line();
  }
  return -1;
}

TEST(Config, QuantitySuffixes) {
  using D = Dimension;
  EXPECT_DOUBLE_EQ(parse_quantity("5 MHz", D::Frequency), kTwoPi * 5.0);
  EXPECT_DOUBLE_EQ(parse_quantity("500 kHz", D::Frequency), kTwoPi * 0.5);
  EXPECT_DOUBLE_EQ(parse_quantity("31.4 rad/us", D::Frequency), 31.4);
  EXPECT_DOUBLE_EQ(parse_quantity("0.8 1/us", D::Rate), 0.8);
  EXPECT_DOUBLE_EQ(parse_quantity("0.8 MHz", D::Rate), 0.8);
  EXPECT_DOUBLE_EQ(parse_quantity("0.8 MHz", D::Rate, RateConvention::Angular), kTwoPi * 0.8);
  EXPECT_DOUBLE_EQ(parse_quantity("250 ns", D::Time), 0.25);
  EXPECT_DOUBLE_EQ(parse_quantity("2 ms", D::Time), 2000.0);
  EXPECT_DOUBLE_EQ(parse_quantity("100 nm", D::Length), 0.1);
  EXPECT_THROW(parse_quantity("5", D::Frequency), ParseError);
  EXPECT_THROW(parse_quantity("5 us", D::Frequency), ParseError);
  EXPECT_THROW(parse_quantity("abc MHz", D::Frequency), ParseError);
}

TEST(Config, FormattedQuantitiesRoundTrip) {
  for (const double v : {0.1, 1.0 / 3.0, 2.0 * std::numbers::pi * 5.0, 1e-7, 12345.678}) {
    for (const Dimension d :
         {Dimension::Frequency, Dimension::Rate, Dimension::Time, Dimension::Length})
      EXPECT_EQ(parse_quantity(format_quantity(v, d), d), v);
  }
}

TEST(Config, MinimalTransferEchoesDefaults) {
  const RunConfig cfg = parse_config_text(
      "experiment: transfer\n"
      "chain:\n  sites: 7\n  v_ratio: 3\n"
      "dressing:\n  omega: 5 MHz\n  delta: 50 MHz\n");
  EXPECT_EQ(cfg.experiment, Experiment::Transfer);
  EXPECT_EQ(cfg.transfer.n_atoms, 7);
  EXPECT_DOUBLE_EQ(cfg.transfer.omega, kTwoPi * 5.0);
  EXPECT_DOUBLE_EQ(cfg.transfer.delta, kTwoPi * 50.0);
  EXPECT_DOUBLE_EQ(cfg.transfer.spacing, 4.4);
  EXPECT_DOUBLE_EQ(cfg.transfer.sigma, 0.1);
  EXPECT_EQ(cfg.transfer.ensemble, 500);
  EXPECT_EQ(cfg.provenance.at("dressing.omega"), "file");
  EXPECT_EQ(cfg.provenance.at("chain.spacing"), "default");
  EXPECT_EQ(cfg.provenance.at("transfer.ensemble"), "default");
}

TEST(Config, RoundTripIsIdentical) {
  for (const Experiment e : {Experiment::Transfer, Experiment::Pump, Experiment::Bound,
                             Experiment::Hrs, Experiment::Chern, Experiment::Derive,
                             Experiment::Validate}) {
    const std::string first = emit_config(parse_config_text("{}", e));
    const std::string second = emit_config(parse_config_text(first, e));
    EXPECT_EQ(first, second) << experiment_name(e);
  }
}

TEST(Config, RoundTripKeepsEditedValues) {
  const RunConfig a = parse_config_text(
      "experiment: hrs\nseeds: [3, 4]\nnoise:\n  gammas: [0.2 1/us, 0.8 1/us]\n"
      "evolution:\n  t_final: 2500 ns\n");
  const RunConfig b = parse_config_text(emit_config(a));
  EXPECT_EQ(b.seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_EQ(b.hrs.gammas, a.hrs.gammas);
  EXPECT_DOUBLE_EQ(b.hrs.t_final, 2.5);
}

TEST(Config, UnknownKeyReportsLine) {
  EXPECT_EQ(parse_error_line("experiment: pump\nchain:\n  sites: 12\n  colour: red\n"), 4);
  EXPECT_EQ(parse_error_line("experiment: pump\nbogus: 1\n"), 2);
  // Keys of another experiment are unknown here.
  EXPECT_EQ(parse_error_line("experiment: chern\ntransfer:\n  ensemble: 3\n"), 3);
}

TEST(Config, MissingUnitReportsLine) {
  EXPECT_EQ(parse_error_line("experiment: transfer\ndressing:\n  omega: 5\n"), 3);
}

TEST(Config, MissingExperimentRejected) {
  EXPECT_EQ(parse_error_line("chain:\n  sites: 7\n"), 1);
  EXPECT_NO_THROW(parse_config_text("chain:\n  sites: 7\n", Experiment::Transfer));
  EXPECT_EQ(parse_error_line("experiment: pump\n", Experiment::Transfer), 1);
}

TEST(Config, MalformedDocumentRejected) {
  EXPECT_GT(parse_error_line("experiment: pump\nchain: [1, 2\n"), 0);
  EXPECT_THROW(parse_config_text("- a\n- b\n"), ParseError);
}

TEST(Config, ExactEngineSizeConflict) {
  RunConfig cfg = parse_config_text("experiment: transfer\nchain:\n  sites: 20\n");
  EXPECT_THROW(validate_config(cfg), ValidationError);
  cfg = parse_config_text("experiment: transfer\nengines: [effective]\nchain:\n  sites: 20\n");
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(Config, OverridesApply) {
  RunConfig cfg = parse_config_text("{}", Experiment::Transfer);
  Overrides o;
  o.seed = 9;
  o.ensemble = 10;
  o.engines = {"effective"};
  o.out = "/tmp/x";
  o.plot = false;
  apply_overrides(cfg, o);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{9}));
  EXPECT_EQ(cfg.transfer.ensemble, 10);
  EXPECT_EQ(cfg.transfer.exact_ensemble, 10);
  EXPECT_TRUE(cfg.engines.effective);
  EXPECT_FALSE(cfg.engines.exact);
  EXPECT_FALSE(cfg.output.svg);
  EXPECT_EQ(cfg.provenance.at("transfer.ensemble"), "flag");

  RunConfig chern = parse_config_text("{}", Experiment::Chern);
  Overrides e;
  e.ensemble = 3;
  EXPECT_THROW(apply_overrides(chern, e), ValidationError);
}

TEST(Config, AngularRateConvention) {
  const RunConfig cfg = parse_config_text(
      "experiment: hrs\nnoise:\n  rate_convention: angular\n  gammas: [0.1 MHz]\n");
  ASSERT_EQ(cfg.hrs.gammas.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.hrs.gammas[0], kTwoPi * 0.1);
}

}  // namespace
}  // namespace rydex::cli
