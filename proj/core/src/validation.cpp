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
#include <random>

#include <unsupported/Eigen/NonLinearOptimization>

#include "rydex/dynamics.hpp"
#include "rydex/experiments.hpp"
#include "rydex/topology.hpp"

namespace rydex {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct RelaxationFit {
  using Scalar = double;
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<double>* t;
  const std::vector<double>* y;
  int inputs() const { return 3; }
  int values() const { return static_cast<int>(t->size()); }

  // y = a - b exp(-g t), parameters (a, b, g).
  int operator()(const VectorXd& p, VectorXd& f) const {
    for (std::size_t k = 0; k < t->size(); ++k)
      f[k] = p[0] - p[1] * std::exp(-p[2] * (*t)[k]) - (*y)[k];
    return 0;
  }
  int df(const VectorXd& p, MatrixXd& j) const {
    for (std::size_t k = 0; k < t->size(); ++k) {
      const double e = std::exp(-p[2] * (*t)[k]);
      j(k, 0) = 1.0;
      j(k, 1) = -e;
      j(k, 2) = p[1] * (*t)[k] * e;
    }
    return 0;
  }
};

DressingProfile random_dressing(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> om(angular_mhz(2.0), angular_mhz(6.0));
  std::uniform_real_distribution<double> de(angular_mhz(40.0), angular_mhz(60.0));
  VectorXd rabi(n);
  VectorXd det(n);
  for (int i = 0; i < n; ++i) {
    rabi[i] = om(rng);
    det[i] = de(rng);
  }
  return DressingProfile::from_values(rabi, det);
}

QuantumState random_state(BasisPtr basis, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  QuantumState psi{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis->dim()))};
  for (Eigen::Index a = 0; a < psi.amplitudes.size(); ++a)
    psi.amplitudes[a] = {g(rng), g(rng)};
  psi.normalize();
  return psi;
}

double number_expectation(const DensityOperator& rho) {
  double n = 0.0;
  for (std::size_t a = 0; a < rho.basis->dim(); ++a)
    n += excitation_count(rho.basis->state(a)) * rho.matrix(a, a).real();
  return n;
}

}  // namespace

ExperimentReport run_validation_suite(std::uint64_t seed) {
  ExperimentReport rep;
  rep.id = "validate";
  rep.add_parameter("seed", static_cast<double>(seed));
  std::mt19937_64 rng(seed);
  const double d = 4.4;

  // Hermiticity of the exact and effective operators.
  {
    const int n = 6;
    const double v = angular_mhz(150.0);
    const ChainSpec chain = ChainSpec::from_nn_shift(n, d, v);
    const DressingProfile dressing = random_dressing(n, rng);
    const ExactHamiltonian ex = build_exact(chain, dressing, 0.0);
    const MatrixXd dense(ex.matrix);
    rep.check_bound("hermitian_exact", (dense - dense.transpose()).cwiseAbs().maxCoeff(), 1e-12,
                    false);
    const EffectiveModel m = derive_effective(chain, dressing, 0.0);
    for (const Sector s : {Sector::excitation_number(1), Sector::excitation_number(2),
                           Sector::dimer(), Sector::full()}) {
      auto basis = SubspaceBasis::get(n, s);
      const MatrixXd h(effective_operator(m, *basis));
      rep.check_bound("hermitian_effective_" + s.name(),
                      (h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12, false);
    }
  }

  // Norm conservation under unitary evolution (Krylov and adaptive RK).
  for (const Method method : {Method::Krylov, Method::AdaptiveRk}) {
    const int n = method == Method::Krylov ? 10 : 4;
    const ChainSpec chain = ChainSpec::from_nn_shift(n, d, angular_mhz(150.0));
    const auto h = HamiltonianHandle::exact(chain, random_dressing(n, rng));
    const QuantumState psi0 = random_state(h.basis(), rng);
    EvolutionConfig cfg;
    cfg.t_final = 1.0;
    cfg.n_outputs = 5;
    cfg.method = method;
    double drift = 0.0;
    evolve_unitary(h, psi0, cfg, [&](double, const QuantumState& psi) {
      drift = std::max(drift, std::abs(psi.norm() - 1.0));
    });
    rep.check_bound(std::string("norm_conservation_") + method_name(method), drift,
                    cfg.rel_tol * cfg.t_final, false);
  }

  // Trace conservation and Hermiticity under the master equation.
  {
    const int n = 4;
    const ChainSpec chain = ChainSpec::from_nn_shift(n, d, angular_mhz(150.0));
    const auto h = HamiltonianHandle::exact(chain, random_dressing(n, rng));
    const DensityOperator rho0 = DensityOperator::pure(random_state(h.basis(), rng));
    EvolutionConfig cfg;
    cfg.t_final = 0.5;
    cfg.n_outputs = 5;
    cfg.method = Method::AdaptiveRk;
    double trace = 0.0;
    double herm = 0.0;
    evolve_lindblad(h, NoiseSpec{0.5, 0.0}, rho0, cfg, [&](double, const DensityOperator& rho) {
      trace = std::max(trace, std::abs(rho.trace() - 1.0));
      herm = std::max(herm, rho.hermiticity_error());
    });
    rep.check_bound("trace_conservation", trace, 1e-7, false);
    rep.check_bound("hermiticity_lindblad", herm, 1e-10, false);
  }

  // Exciton-number conservation of the effective engine with dephasing.
  {
    const int n = 4;
    const ChainSpec chain = ChainSpec::from_nn_shift(n, d, angular_mhz(150.0));
    auto basis = SubspaceBasis::get(n, Sector::full());
    const auto h = HamiltonianHandle::effective(chain, random_dressing(n, rng), basis, {},
                                                angular_mhz(50.0));
    const auto psi0 = QuantumState::superposition(
        basis, {{0b0011, 1.0}, {0b1010, std::complex<double>(0.0, 1.0)}});
    EvolutionConfig cfg;
    cfg.t_final = 1.0;
    cfg.n_outputs = 7;
    cfg.method = Method::AdaptiveRk;
    double drift = 0.0;
    evolve_lindblad(h, NoiseSpec{0.3, 0.0}, DensityOperator::pure(psi0), cfg,
                    [&](double, const DensityOperator& rho) {
                      drift = std::max(drift, std::abs(number_expectation(rho) - 2.0));
                    });
    rep.check_bound("number_conservation_effective", drift, 1e-9, false);
  }

  // g2 normalization and projection idempotence.
  {
    const int n = 7;
    auto two = SubspaceBasis::get(n, Sector::excitation_number(2));
    const QuantumState psi = random_state(two, rng);
    const MatrixXd g2 = g2_correlation(psi);
    rep.check_bound("g2_normalization", std::abs(0.5 * g2.sum() - 1.0), 1e-9, false);
    rep.check_bound("g2_nonnegative", -g2.minCoeff(), 0.0, false);

    auto full = SubspaceBasis::get(n, Sector::full());
    const QuantumState phi = random_state(full, rng);
    for (const ProjectionMode mode : {ProjectionMode::Diagonal, ProjectionMode::Coherent}) {
      const Projection once = project_to_sector(phi, 2, mode);
      const Projection twice =
          project_to_sector(once.rho.embed(full), 2, mode);
      rep.check_bound(std::string("projection_idempotent_") +
                          (mode == ProjectionMode::Diagonal ? "diagonal" : "coherent"),
                      (once.rho.matrix - twice.rho.matrix).cwiseAbs().maxCoeff() +
                          std::abs(twice.probability - 1.0),
                      1e-12, false);
    }
  }

  // Chern sum rule.
  {
    const auto bloch = make_rice_mele_bloch(angular_mhz(5.0), angular_mhz(20.0),
                                            angular_mhz(60.0));
    const ChernResult r = chern_numbers(bloch, 32, 32);
    int sum = 0;
    for (const int c : r.chern) sum += c;
    rep.check_true("chern_sum_rule", sum == 0);
  }

  // Pump schedule endpoints.
  {
    const PumpSchedule s = pump_schedule(27.7);
    const double err = std::max({std::abs(s.phase(0.0)),
                                 std::abs(s.phase(s.period) - std::numbers::pi),
                                 std::abs(s.phase(0.5 * s.period) - 0.5 * std::numbers::pi)});
    rep.check_bound("schedule_endpoints", err, 1e-12, false);
  }

  // Single-atom dephasing: rho_rr relaxes toward 1/2 at Omega^2 gamma / 2 Delta^2.
  {
    const double omega = angular_mhz(5.0);
    const double delta = 10.0 * omega;
    const double gamma = omega / 50.0;
    const double rate = omega * omega * gamma / (2.0 * delta * delta);
    // A second, undriven and non-interacting atom stays in |g>.
    const ChainSpec chain = ChainSpec::uniform(2, d, 0.0);
    VectorXd rabi(2);
    rabi << omega, 0.0;
    const auto h = HamiltonianHandle::exact(
        chain, DressingProfile::from_values(rabi, VectorXd::Constant(2, delta)));
    EvolutionConfig cfg;
    cfg.t_final = 4.0 / rate;
    cfg.n_outputs = 401;
    cfg.method = Method::DenseExpm;
    std::vector<double> t;
    std::vector<double> y;
    evolve_lindblad(h, NoiseSpec{gamma, 0.0},
                    DensityOperator::pure(QuantumState::basis_state(h.basis(), 0)), cfg,
                    [&](double time, const DensityOperator& rho) {
                      t.push_back(time);
                      y.push_back(rho.matrix(1, 1).real());
                    });
    RelaxationFit fit{&t, &y};
    Eigen::LevenbergMarquardt<RelaxationFit> lm(fit);
    VectorXd p(3);
    p << 0.5, 0.5, rate;
    lm.minimize(p);
    rep.add_parameter("dephasing_rate_fit", p[2], "1/us");
    rep.add_parameter("dephasing_rate_predicted", rate, "1/us");
    rep.check_bound("single_atom_dephasing_rate", std::abs(p[2] / rate - 1.0), 0.1, false,
                    "relative deviation of the fitted rate");
  }
  return rep;
}

}  // namespace rydex
