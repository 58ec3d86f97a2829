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


#include <benchmark/benchmark.h>

#include "rydex/basis.hpp"
#include "rydex/dynamics.hpp"
#include "rydex/hamiltonian.hpp"
#include "rydex/lattice.hpp"
#include "rydex/topology.hpp"

namespace {

using namespace rydex;

constexpr double kOmega = angular_mhz(5.0);
constexpr double kDelta = angular_mhz(50.0);

ChainSpec chain_of(int n) { return ChainSpec::from_nn_shift(n, 4.4, 3.0 * kDelta); }

void BM_BuildExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainSpec chain = chain_of(n);
  const auto dressing = DressingProfile::homogeneous(n, kOmega, kDelta);
  for (auto _ : state) benchmark::DoNotOptimize(build_exact(chain, dressing, 0.0));
}
BENCHMARK(BM_BuildExact)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_DeriveEffective(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainSpec chain = chain_of(n);
  const auto dressing = DressingProfile::homogeneous(n, kOmega, kDelta);
  for (auto _ : state) benchmark::DoNotOptimize(derive_effective(chain, dressing, 0.0));
}
BENCHMARK(BM_DeriveEffective)->RangeMultiplier(4)->Range(8, 512);

void BM_KrylovExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ExactHamiltonian ex =
      build_exact(chain_of(n), DressingProfile::homogeneous(n, kOmega, kDelta), 0.0);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ex.matrix.rows());
  v[1] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(krylov_expv(ex.matrix, nullptr, v, 0.5));
}
BENCHMARK(BM_KrylovExact)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

void BM_Trajectories(benchmark::State& state) {
  const int n = 11;
  const auto basis = SubspaceBasis::get(n, Sector::excitation_number(1));
  const auto h = HamiltonianHandle::effective(
      chain_of(n), DressingProfile::homogeneous(n, kOmega, kDelta), basis);
  const QuantumState psi0 = QuantumState::basis_state(basis, Config{1} << (n / 2));
  EvolutionConfig cfg;
  cfg.t_final = 3.0;
  cfg.n_outputs = 31;
  cfg.trajectory_count = static_cast<int>(state.range(0));
  TrajectoryRequest req;
  req.observable = [](double, const QuantumState& psi) {
    return Eigen::VectorXd(psi.amplitudes.cwiseAbs2());
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(evolve_trajectories(h, NoiseSpec{0.8, 0.0}, psi0, cfg, req));
}
BENCHMARK(BM_Trajectories)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_HrsSolver(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Eigen::VectorXd hopping(3);
  hopping << 1.0, 0.2, 0.05;
  const std::vector<double> times{0.5, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_hrs(hopping, 0.8, n, n / 2, times));
}
BENCHMARK(BM_HrsSolver)->Arg(51)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_Chern(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  const auto bloch = make_rice_mele_bloch(kOmega, angular_mhz(20.0), angular_mhz(60.0));
  for (auto _ : state) benchmark::DoNotOptimize(chern_numbers(bloch, grid, grid));
}
BENCHMARK(BM_Chern)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
