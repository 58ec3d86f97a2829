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

// Acceptance driver: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rydex/error.hpp"
#include "rydex/experiments.hpp"
#include "rydex/hamiltonian.hpp"

namespace {

using namespace rydex;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Tolerances.
constexpr double kOracleTol = 1e-10;
constexpr double kSplittingFactor = 3.0;  // times (Omega/Delta)^2
constexpr int kSetsPerSize = 20;
constexpr double kMinDetuningRatio = 8.0;
constexpr double kFacilitationRatio = 0.1;
// Keeps the sampling error of the exact <x^2> near 0.6% at late times.
constexpr int kHrsTrajectories = 2000;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double x, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Sorted eigenvalues of the exact spectrum whose eigenvectors carry the most
// weight in the given sector, as many as the sector dimension.
VectorXd dressed_levels(const ExactHamiltonian& ex, const SubspaceBasis& sector) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(MatrixXd(ex.matrix));
  const auto& full = *ex.basis;
  const Eigen::Index dim = es.eigenvalues().size();
  std::vector<std::pair<double, Eigen::Index>> weight;
  for (Eigen::Index k = 0; k < dim; ++k) {
    double w = 0.0;
    for (const Config c : sector.states())
      w += std::pow(es.eigenvectors()(static_cast<Eigen::Index>(full.index(c)), k), 2);
    weight.emplace_back(-w, k);
  }
  std::sort(weight.begin(), weight.end());
  VectorXd levels(static_cast<Eigen::Index>(sector.dim()));
  for (Eigen::Index a = 0; a < levels.size(); ++a)
    levels[a] = es.eigenvalues()[weight[a].second];
  std::sort(levels.begin(), levels.end());
  return levels;
}

VectorXd centered(VectorXd v) {
  v.array() -= v.mean();
  return v;
}

// Smallest |Delta_i + V_ij| / |Delta_i| over ordered pairs.
double facilitation_margin(const ChainSpec& chain, const VectorXd& detuning) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < chain.n_sites; ++i)
    for (int j = 0; j < chain.n_sites; ++j)
      if (i != j)
        m = std::min(m, std::abs(detuning[i] + vdw_interaction(chain, i, j)) /
                            std::abs(detuning[i]));
  return m;
}

// Closed-form couplings against the van Vleck oracle and exact spectra over
// random chains. The oracle comparison covers the single-exciton sector and
// the two-site pair sector; with spectators the pair sector carries the
// documented two-body approximation and only the splittings are compared.
Outcome criterion_coupling_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_oracle = 0.0;
  double worst_split = 0.0;  // error over its bound
  std::string worst_where;
  int sets = 0;
  int over = 0;
  int over_sector[3] = {0, 0, 0};
  double min_margin_over = std::numeric_limits<double>::infinity();
  double max_margin_over = 0.0;
  for (int n = 2; n <= 6; ++n) {
    for (int s = 0; s < kSetsPerSize; ++s) {
      // Per-site drives and detunings, a random sign, V(d)/Delta in [-4, 4]
      // and positional disorder; redraw until every pair clears facilitation.
      ChainSpec chain;
      VectorXd rabi(n), detuning(n);
      for (;;) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        const double delta0 = sign * angular_mhz(20.0 + 80.0 * unit(rng));
        for (int i = 0; i < n; ++i) {
          detuning[i] = delta0 * (1.0 + 0.1 * (unit(rng) - 0.5));
          rabi[i] = std::abs(detuning[i]) / (kMinDetuningRatio + 12.0 * unit(rng));
        }
        const double v_ratio = -4.0 + 8.0 * unit(rng);
        chain = sample_disorder(ChainSpec::from_nn_shift(n, 4.4, v_ratio * delta0, 0.2), rng());
        if (facilitation_margin(chain, detuning) >= kFacilitationRatio) break;
      }
      ++sets;
      const DressingProfile dressing = DressingProfile::from_values(rabi, detuning);
      const double ratio = (rabi.array() / detuning.array().abs()).maxCoeff();
      const double margin = facilitation_margin(chain, detuning);
      const ExactHamiltonian ex = build_exact(chain, dressing, 0.0);
      const EffectiveModel model = derive_effective(chain, dressing, 0.0);
      bool set_over = false;
      for (int k = 1; k <= 2; ++k) {
        const Sector sector = Sector::excitation_number(k);
        const auto basis = SubspaceBasis::get(n, sector);
        const MatrixXd eff = MatrixXd(effective_operator(model, *basis));
        if (k == 1 || n == 2) {
          const MatrixXd oracle = van_vleck_oracle(ex, sector);
          worst_oracle = std::max(worst_oracle, (eff - oracle).cwiseAbs().maxCoeff() /
                                                    oracle.cwiseAbs().maxCoeff());
        }
        if (basis->dim() < 2) continue;
        const VectorXd ed = centered(dressed_levels(ex, *basis));
        const VectorXd pt =
            centered(Eigen::SelfAdjointEigenSolver<MatrixXd>(eff).eigenvalues());
        const double err = (ed - pt).cwiseAbs().maxCoeff() / ed.cwiseAbs().maxCoeff();
        const double bound = kSplittingFactor * ratio * ratio;
        if (err > bound) {
          set_over = true;
          ++over_sector[k];
        }
        if (err / bound > worst_split) {
          worst_split = err / bound;
          worst_where = "N=" + std::to_string(n) + " n=" + std::to_string(k) +
                        " Omega/Delta=" + fmt(ratio) + " |Delta+V|/|Delta|=" + fmt(margin);
        }
      }
      if (set_over) {
        ++over;
        min_margin_over = std::min(min_margin_over, margin);
        max_margin_over = std::max(max_margin_over, margin);
      }
    }
  }
  Outcome o;
  o.passed = worst_oracle <= kOracleTol && worst_split <= 1.0;
  o.detail = std::to_string(sets) + " sets; oracle rel " + fmt(worst_oracle) + " (tol " +
             fmt(kOracleTol) + "); splitting error up to " + fmt(worst_split) +
             " x 3(Omega/Delta)^2 at " + worst_where + "; " + std::to_string(over) +
             " sets over the bound (" + std::to_string(over_sector[1]) + " one-exciton, " +
             std::to_string(over_sector[2]) + " two-exciton)";
  if (over > 0)
    o.detail += ", all with |Delta+V|/|Delta| in [" + fmt(min_margin_over) + ", " +
                fmt(max_margin_over) + "]";
  return o;
}

// Summarizes the checks of a report whose names pass the filter.
Outcome from_checks(const ExperimentReport& rep,
                    const std::function<bool(const std::string&)>& keep) {
  Outcome o;
  o.passed = true;
  int used = 0;
  for (const auto& c : rep.checks) {
    if (!keep(c.name)) continue;
    ++used;
    o.passed = o.passed && c.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += (c.passed ? "" : "FAILED ") + c.name + " " + fmt(c.value, 7) + " " +
                c.relation + " " + fmt(c.threshold, 7);
  }
  if (used == 0) {
    o.passed = false;
    o.detail = "no checks ran";
  }
  return o;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

const ExperimentReport& hrs_report() {
  static const ExperimentReport rep = [] {
    HrsConfig cfg;
    cfg.trajectories = kHrsTrajectories;
    return run_hrs_crossover(cfg);
  }();
  return rep;
}

const ExperimentReport& validation_report() {
  static const ExperimentReport rep = run_validation_suite(1);
  return rep;
}

Outcome criterion_chern() {
  return from_checks(run_chern(ChernConfig{}), [](const std::string&) { return true; });
}

Outcome criterion_pump() {
  return from_checks(run_thouless_pump(PumpConfig{}), [](const std::string&) { return true; });
}

Outcome criterion_transfer() {
  return from_checks(run_entanglement_transfer(TransferConfig{}),
                     [](const std::string&) { return true; });
}

Outcome criterion_hrs() {
  return from_checks(hrs_report(), [](const std::string& n) { return !starts_with(n, "decay_"); });
}

Outcome criterion_decay() {
  return from_checks(hrs_report(), [](const std::string& n) { return starts_with(n, "decay_"); });
}

Outcome criterion_bound() {
  return from_checks(run_bound_state_transport(BoundConfig{}),
                     [](const std::string&) { return true; });
}

Outcome criterion_dephasing_rate() {
  return from_checks(validation_report(),
                     [](const std::string& n) { return n == "single_atom_dephasing_rate"; });
}

Outcome criterion_invariants() {
  return from_checks(validation_report(),
                     [](const std::string& n) { return n != "single_atom_dephasing_rate"; });
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "effective couplings", criterion_coupling_oracle},
      {2, "Chern numbers", criterion_chern},
      {3, "Thouless pump", criterion_pump},
      {4, "state transfer", criterion_transfer},
      {5, "HRS law", criterion_hrs},
      {6, "decay factorization", criterion_decay},
      {7, "bound states", criterion_bound},
      {8, "single-atom dephasing rate", criterion_dephasing_rate},
      {9, "invariant suite", criterion_invariants},
  };
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::stoi(argv[a]));

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << o.detail << " [" << fmt(secs) << " s]" << std::endl;
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
