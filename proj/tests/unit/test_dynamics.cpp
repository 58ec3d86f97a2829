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

#include "rydex/dynamics.hpp"
#include "rydex/error.hpp"
#include "rydex/experiments.hpp"
#include "rydex/observables.hpp"
#include "rydex/topology.hpp"

namespace rydex {
namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

HamiltonianHandle small_exact(int n, double delta = angular_mhz(50)) {
  const auto chain = ChainSpec::from_nn_shift(n, 4.4, 3 * delta);
  return HamiltonianHandle::exact(chain, DressingProfile::homogeneous(n, angular_mhz(5), delta));
}

QuantumState final_state(const HamiltonianHandle& h, const QuantumState& psi0, Method m,
                         double t) {
  EvolutionConfig cfg;
  cfg.t_final = t;
  cfg.n_outputs = 2;
  cfg.method = m;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  return evolve_unitary(h, psi0, cfg).states.back();
}

TEST(Dynamics, UnitaryMethodsAgree) {
  const auto h = small_exact(6);
  const auto psi0 = QuantumState::basis_state(h.basis(), 0b000100);
  const QuantumState a = final_state(h, psi0, Method::DenseExpm, 0.5);
  const QuantumState b = final_state(h, psi0, Method::Krylov, 0.5);
  const QuantumState c = final_state(h, psi0, Method::AdaptiveRk, 0.5);
  EXPECT_LT((a.amplitudes - b.amplitudes).norm(), 1e-7);
  EXPECT_LT((a.amplitudes - c.amplitudes).norm(), 1e-6);
  EXPECT_NEAR(b.norm(), 1.0, 1e-9);
}

TEST(Dynamics, KrylovExpvMatchesDenseExponential) {
  const auto h = small_exact(5);
  const RealSparse& m = *h.at(0.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  VectorXcd v(m.rows());
  for (auto& x : v) x = {g(rng), g(rng)};
  v.normalize();
  // Reference from the eigendecomposition of the real symmetric matrix.
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es{MatrixXd(m)};
  const MatrixXcd u = es.eigenvectors().cast<std::complex<double>>();
  const VectorXcd phases =
      (std::complex<double>(0, -0.3) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
  const VectorXcd ref = u * phases.asDiagonal() * (u.adjoint() * v);
  EXPECT_LT((krylov_expv(m, nullptr, v, 0.3) - ref).norm(), 1e-9);
}

TEST(Dynamics, TimeDependentNormConserved) {
  const int n = 6;
  const auto chain = ChainSpec::from_nn_shift(n, 4.4, 3 * angular_mhz(20), 0.0, Boundary::Periodic);
  const auto dressing = pump_dressing(n, angular_mhz(5), angular_mhz(20), pump_schedule(5.0));
  const auto basis = SubspaceBasis::get(n, Sector::excitation_number(1));
  const auto h = HamiltonianHandle::effective(chain, dressing, basis, {}, angular_mhz(20));
  EvolutionConfig cfg;
  cfg.t_final = 5.0;
  cfg.n_outputs = 11;
  cfg.dt_max = 0.01;
  evolve_unitary(h, QuantumState::basis_state(basis, 1), cfg,
                 [](double, const QuantumState& psi) { EXPECT_NEAR(psi.norm(), 1.0, 1e-8); });
}

TEST(Dynamics, ClosedLindbladIsUnitary) {
  const auto h = small_exact(3);
  const auto psi0 = QuantumState::basis_state(h.basis(), 0b001);
  EvolutionConfig cfg;
  cfg.t_final = 1.0;
  cfg.n_outputs = 2;
  cfg.method = Method::DenseExpm;
  const auto rho = evolve_lindblad(h, NoiseSpec{}, DensityOperator::pure(psi0), cfg).states.back();
  const auto psi = final_state(h, psi0, Method::DenseExpm, 1.0);
  EXPECT_LT((rho.matrix - DensityOperator::pure(psi).matrix).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Dynamics, LindbladMethodsAgreeAndConserveTrace) {
  const auto h = small_exact(3);
  const NoiseSpec noise{0.8, 0.3};
  const auto rho0 = DensityOperator::pure(QuantumState::basis_state(h.basis(), 0b010));
  std::vector<MatrixXcd> finals;
  for (const Method m : {Method::DenseExpm, Method::AdaptiveRk, Method::Krylov}) {
    EvolutionConfig cfg;
    cfg.t_final = 1.5;
    cfg.n_outputs = 4;
    cfg.method = m;
    cfg.rel_tol = 1e-9;
    const auto series = evolve_lindblad(h, noise, rho0, cfg);
    for (const auto& rho : series.states) {
      EXPECT_NEAR(rho.trace().real(), 1.0, 1e-8) << method_name(m);
      EXPECT_LT(rho.hermiticity_error(), 1e-10) << method_name(m);
    }
    finals.push_back(series.states.back().matrix);
  }
  EXPECT_LT((finals[0] - finals[1]).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((finals[0] - finals[2]).cwiseAbs().maxCoeff(), 1e-6);
}

void expect_trajectories_match_lindblad(const NoiseSpec& noise, Unraveling unraveling) {
  const auto h = small_exact(3);
  const auto psi0 = QuantumState::basis_state(h.basis(), 0b001);
  EvolutionConfig cfg;
  cfg.t_final = 1.0;
  cfg.n_outputs = 3;
  cfg.method = Method::DenseExpm;
  const auto ref = evolve_lindblad(h, noise, DensityOperator::pure(psi0), cfg);
  cfg.method = Method::Krylov;
  cfg.trajectory_count = 1000;
  cfg.seed = 9;
  TrajectoryRequest req;
  req.unraveling = unraveling;
  req.observable = [](double, const QuantumState& q) { return density_profile(q); };
  const TrajectoryResult tr = evolve_trajectories(h, noise, psi0, cfg, req);
  ASSERT_EQ(tr.times.size(), ref.times.size());
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const VectorXd exact = density_profile(ref.states[k]);
    for (Eigen::Index i = 0; i < exact.size(); ++i)
      EXPECT_NEAR(tr.mean[k][i], exact[i], 4.0 * tr.std_error[k][i] + 1e-9)
          << "t " << tr.times[k] << " site " << i;
  }
}

TEST(Dynamics, TrajectoriesReproduceLindblad) {
  expect_trajectories_match_lindblad(NoiseSpec{2.0, 0.0}, Unraveling::SignFlip);
}

TEST(Dynamics, ProjectorUnravelingWithDecayReproducesLindblad) {
  expect_trajectories_match_lindblad(NoiseSpec{2.0, 0.5}, Unraveling::Projector);
}

TEST(Dynamics, TrajectoriesDeterministicAcrossThreads) {
  const auto h = small_exact(4);
  const auto psi0 = QuantumState::basis_state(h.basis(), 0b0010);
  EvolutionConfig cfg;
  cfg.t_final = 0.5;
  cfg.n_outputs = 3;
  cfg.trajectory_count = 16;
  cfg.seed = 4;
  TrajectoryRequest req;
  req.observable = [](double, const QuantumState& q) { return density_profile(q); };
  cfg.threads = 1;
  const auto a = evolve_trajectories(h, NoiseSpec{1.0, 0.2}, psi0, cfg, req);
  cfg.threads = 3;
  const auto b = evolve_trajectories(h, NoiseSpec{1.0, 0.2}, psi0, cfg, req);
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(a.jump_count, b.jump_count);
  for (std::size_t k = 0; k < a.mean.size(); ++k) EXPECT_EQ(a.mean[k], b.mean[k]);
  EXPECT_NE(trajectory_seed(4, 0), trajectory_seed(4, 1));
}

TEST(Dynamics, PostSelectedTrajectoriesKeepNumber) {
  const auto h = small_exact(4);
  EvolutionConfig cfg;
  cfg.t_final = 0.5;
  cfg.n_outputs = 3;
  cfg.trajectory_count = 8;
  TrajectoryRequest req;
  req.post_select = 1;
  req.observable = [](double, const QuantumState& q) {
    VectorXd v(1);
    v << density_profile(q).sum();
    return v;
  };
  const auto r = evolve_trajectories(h, NoiseSpec{0.5, 0.0},
                                     QuantumState::basis_state(h.basis(), 0b0100), cfg, req);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    EXPECT_NEAR(r.mean[k][0], 1.0, 1e-12);
    EXPECT_GT(r.probability[k], 0.9);
  }
}

TEST(Dynamics, HrsMatchesClosedFormBeforeBoundary) {
  const VectorXd j = homogeneous_hopping(angular_mhz(5), angular_mhz(50), angular_mhz(150), 3);
  const std::vector<double> t{0.0, 0.5, 1.0, 2.0, 3.0};
  const HrsResult r = evolve_hrs(j, 0.8, 101, 50, t);
  for (std::size_t k = 1; k < t.size(); ++k)
    EXPECT_NEAR(r.msd[k] / hrs_msd_closed_form(j, 0.8, t[k]), 1.0, 1e-6) << t[k];
  EXPECT_NEAR(r.states.back().rho.trace().real(), 1.0, 1e-9);
}

TEST(Dynamics, HrsClosedFormLimits) {
  VectorXd j(2);
  j << 1.0, 0.2;
  const double s = 1.0 + 4.0 * 0.04;
  // Ballistic start: 2 S t^2; diffusive tail: slope 4 S / gamma.
  EXPECT_NEAR(hrs_msd_closed_form(j, 0.5, 1e-4) / (2 * s * 1e-8), 1.0, 1e-4);
  const double g = 2.0;
  const double slope = hrs_msd_closed_form(j, g, 101.0) - hrs_msd_closed_form(j, g, 100.0);
  EXPECT_NEAR(slope, 4.0 * s / g, 1e-9);
}

TEST(Dynamics, ConfigValidation) {
  EvolutionConfig cfg;
  cfg.t_final = -1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.output_times = {0.0, 0.5, 0.4};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.trajectory_count = 0;
  EXPECT_THROW(cfg.validate(true), ValidationError);
  EXPECT_EQ(parse_method(method_name(Method::AdaptiveRk)), Method::AdaptiveRk);
}

TEST(Dynamics, DenseCapEnforced) {
  const auto h = small_exact(5);
  EvolutionConfig cfg;
  cfg.dense_cap = 16;
  cfg.method = Method::DenseExpm;
  const auto psi0 = QuantumState::basis_state(h.basis(), 1);
  EXPECT_THROW(evolve_unitary(h, psi0, cfg), DimensionCapError);
  EXPECT_THROW(evolve_lindblad(h, NoiseSpec{0.1, 0.0}, DensityOperator::pure(psi0), cfg),
               DimensionCapError);
}

}  // namespace
}  // namespace rydex
