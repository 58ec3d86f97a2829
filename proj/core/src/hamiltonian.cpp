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

#include "rydex/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <utility>

#include "rydex/error.hpp"

namespace rydex {

namespace {

Eigen::MatrixXd interaction_matrix(const ChainSpec& chain) {
  const int n = chain.n_sites;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = vdw_interaction(chain, i, j);
  return v;
}

Eigen::VectorXd interaction_diagonal(const SubspaceBasis& basis,
                                     const Eigen::MatrixXd& v) {
  const int n = basis.n_sites();
  Eigen::VectorXd diag(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const Config c = basis.state(k);
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!is_excited(c, i)) continue;
      for (int j = i + 1; j < n; ++j)
        if (is_excited(c, j)) e += v(i, j);
    }
    diag[k] = e;
  }
  return diag;
}

std::string pair_name(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

void apply_policy(GuardPolicy policy, const std::string& message,
                  std::vector<std::string>& warnings, bool facilitation, int i,
                  int j) {
  switch (policy) {
    case GuardPolicy::Ignore:
      return;
    case GuardPolicy::Warn:
      warnings.push_back(message);
      return;
    case GuardPolicy::Error:
      if (facilitation) throw FacilitationResonanceError(message, i, j);
      throw LargeDetuningError(message);
  }
}

// Relative slack so that parameter points sitting exactly on a guard
// boundary (e.g. Delta + V = 0.1|Delta|) are admitted despite rounding.
constexpr double kGuardSlack = 1e-9;

}  // namespace

ExactHamiltonian build_exact(const ChainSpec& chain,
                             const DressingProfile& dressing, double t) {
  ExactHamiltonianBuilder builder(chain, dressing);
  ExactHamiltonian h;
  h.basis = builder.basis();
  h.matrix = builder.at(t);
  h.rabi = dressing.rabi_at(t);
  h.detuning = dressing.detuning_at(t);
  h.time = t;
  return h;
}

ExactHamiltonianBuilder::ExactHamiltonianBuilder(ChainSpec chain,
                                                 DressingProfile dressing)
    : chain_(std::move(chain)), dressing_(std::move(dressing)) {
  chain_.validate();
  if (dressing_.n_sites() != chain_.n_sites)
    throw ValidationError("dressing profile does not match the chain length");
  const int n = chain_.n_sites;
  basis_ = SubspaceBasis::get(n, Sector::full());
  interaction_diagonal_ = interaction_diagonal(*basis_, interaction_matrix(chain_));

  const auto dim = static_cast<Eigen::Index>(basis_->dim());
  matrix_.resize(dim, dim);
  matrix_.reserve(Eigen::VectorXi::Constant(dim, n + 1));
  // Row-major insertion in column order keeps entries sorted per row.
  for (Eigen::Index row = 0; row < dim; ++row) {
    std::vector<std::pair<Eigen::Index, int>> cols;
    cols.reserve(n + 1);
    cols.emplace_back(row, -1);
    for (int i = 0; i < n; ++i)
      cols.emplace_back(static_cast<Eigen::Index>(row ^ (Config{1} << i)), i);
    std::sort(cols.begin(), cols.end());
    for (const auto& [col, site] : cols) matrix_.insert(row, col) = 0.0;
  }
  matrix_.makeCompressed();
  entry_site_.resize(matrix_.nonZeros());
  for (Eigen::Index row = 0; row < dim; ++row) {
    for (RealSparse::InnerIterator it(matrix_, row); it; ++it) {
      const auto flipped = static_cast<Config>(row) ^ static_cast<Config>(it.col());
      entry_site_[&it.valueRef() - matrix_.valuePtr()] =
          flipped == 0 ? -1 : std::countr_zero(flipped);
    }
  }
}

const RealSparse& ExactHamiltonianBuilder::at(double t) {
  dressing_.validate(t);
  const Eigen::VectorXd rabi = dressing_.rabi_at(t);
  const Eigen::VectorXd detuning = dressing_.detuning_at(t);
  const int n = chain_.n_sites;
  const auto dim = static_cast<Eigen::Index>(basis_->dim());
  double* values = matrix_.valuePtr();
  for (Eigen::Index row = 0; row < dim; ++row) {
    for (RealSparse::InnerIterator it(matrix_, row); it; ++it) {
      const std::ptrdiff_t pos = &it.valueRef() - values;
      const int site = entry_site_[pos];
      if (site >= 0) {
        values[pos] = 0.5 * rabi[site];
      } else {
        double e = interaction_diagonal_[row];
        for (int i = 0; i < n; ++i)
          if (is_excited(static_cast<Config>(row), i)) e += detuning[i];
        values[pos] = e;
      }
    }
  }
  return matrix_;
}

EffectiveModel derive_effective(const ChainSpec& chain,
                                const DressingProfile& dressing, double t,
                                const EffectiveOptions& options) {
  chain.validate();
  if (dressing.n_sites() != chain.n_sites)
    throw ValidationError("dressing profile does not match the chain length");
  dressing.validate(t);

  const int n = chain.n_sites;
  EffectiveModel m;
  m.n_sites = n;
  m.time = t;
  m.rabi = dressing.rabi_at(t);
  m.detuning = dressing.detuning_at(t);
  const Eigen::VectorXd& om = m.rabi;
  const Eigen::VectorXd& de = m.detuning;
  const Eigen::MatrixXd v = interaction_matrix(chain);

  for (int i = 0; i < n; ++i) {
    if (om[i] > options.validity_ratio * std::abs(de[i]) * (1.0 + kGuardSlack)) {
      std::ostringstream msg;
      msg << "large-detuning condition violated at site " << i << ": Omega/|Delta| = "
          << om[i] / std::abs(de[i]) << " > " << options.validity_ratio;
      apply_policy(options.validity_policy, msg.str(), m.warnings, false, i, i);
    }
  }

  auto in_range = [&](int i, int j, int range) {
    return range <= 0 || chain.index_distance(i, j) <= range;
  };
  auto check_denominator = [&](double delta, double shifted, int i, int j) {
    if (std::abs(shifted) * (1.0 + kGuardSlack) < options.facilitation_ratio * std::abs(delta)) {
      std::ostringstream msg;
      msg << "facilitation resonance for pair " << pair_name(i, j)
          << ": |Delta + V| = " << std::abs(shifted) << " < "
          << options.facilitation_ratio << " |Delta| = "
          << options.facilitation_ratio * std::abs(delta);
      apply_policy(options.facilitation_policy, msg.str(), m.warnings, true, i, j);
    }
  };

  const int max_range = (options.hopping_range <= 0 || options.interaction_range <= 0)
                            ? 0
                            : std::max(options.hopping_range, options.interaction_range);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!in_range(i, j, max_range)) continue;
      check_denominator(de[i], de[i] + v(i, j), i, j);
      check_denominator(de[j], de[j] + v(i, j), i, j);
    }

  m.ising = Eigen::MatrixXd::Zero(n, n);
  m.exchange = Eigen::MatrixXd::Zero(n, n);
  m.exciton_interaction = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double vij = v(i, j);
      if (in_range(i, j, options.interaction_range))
        m.ising(i, j) = om[j] * om[j] * vij / (4.0 * de[j] * (de[j] + vij));
      if (in_range(i, j, options.hopping_range)) {
        double jij = 0.0;
        for (const double db : {de[i], de[j]})
          jij += om[i] * om[j] * vij / (8.0 * db * (db + vij));
        m.exchange(i, j) = jij;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && in_range(i, j, options.interaction_range))
        m.exciton_interaction(i, j) = v(i, j) - 2.0 * (m.ising(i, j) + m.ising(j, i));

  m.mu.resize(n);
  for (int i = 0; i < n; ++i)
    m.mu[i] = de[i] + om[i] * om[i] / (2.0 * de[i]) + m.ising.row(i).sum();

  // Dimer sector: three-body forms that keep the spectator shifts.
  m.dimer_onsite = Eigen::VectorXd::Zero(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) {
    const int j = i + 1;
    const double vij = v(i, j);
    double e = de[i] + de[j] + vij + om[i] * om[i] / (2.0 * de[i]) +
               om[j] * om[j] / (2.0 * de[j]);
    e -= om[j] * om[j] * vij / (4.0 * de[j] * (de[j] + vij)) +
         om[i] * om[i] * vij / (4.0 * de[i] * (de[i] + vij));
    for (int s = 0; s < n; ++s) {
      if (s == i || s == j) continue;
      const double shift = v(i, s) + v(j, s);
      check_denominator(de[s], de[s] + shift, i, s);
      e += om[s] * om[s] * shift / (4.0 * de[s] * (de[s] + shift));
    }
    m.dimer_onsite[i] = e;
  }
  m.dimer_exchange = Eigen::VectorXd::Zero(std::max(n - 2, 0));
  for (int i = 0; i + 2 < n; ++i) {
    const int k = i + 1;
    const int j = i + 2;
    double j2 = 0.0;
    for (const int b : {i, j}) {
      const double first = de[b] + v(k, b);
      const double second = first + v(i, j);
      check_denominator(de[b], second, i, j);
      j2 += om[i] * om[j] * v(i, j) / (8.0 * first * second);
    }
    m.dimer_exchange[i] = j2;
  }
  return m;
}

double dimer_exchange_single_term(const ChainSpec& chain,
                                  const Eigen::VectorXd& rabi,
                                  const Eigen::VectorXd& detuning, int i) {
  if (i < 0 || i + 2 >= chain.n_sites)
    throw InvalidPairError("dimer exchange index out of range");
  const double v01 = vdw_interaction(chain, i, i + 1);
  const double v02 = vdw_interaction(chain, i, i + 2);
  return rabi[i] * rabi[i + 2] * v02 /
         (4.0 * (detuning[i] + v01) * (detuning[i] + v01 + v02));
}

RealSparse effective_operator(const EffectiveModel& model,
                              const SubspaceBasis& basis, double energy_shift) {
  const int n = model.n_sites;
  if (basis.n_sites() != n)
    throw ValidationError("basis and effective model differ in site count");
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  std::vector<Eigen::Triplet<double>> triplets;

  if (basis.sector().kind == Sector::Kind::Dimer) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      triplets.emplace_back(k, k, model.dimer_onsite[k] - 2.0 * energy_shift);
      if (k + 1 < dim) {
        triplets.emplace_back(k, k + 1, model.dimer_exchange[k]);
        triplets.emplace_back(k + 1, k, model.dimer_exchange[k]);
      }
    }
  } else {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Config c = basis.state(k);
      double diag = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!is_excited(c, i)) continue;
        diag += model.mu[i] - energy_shift;
        for (int j = i + 1; j < n; ++j)
          if (is_excited(c, j)) diag += model.exciton_interaction(i, j);
      }
      triplets.emplace_back(k, k, diag);
      for (int i = 0; i < n; ++i) {
        if (!is_excited(c, i)) continue;
        for (int j = 0; j < n; ++j) {
          if (is_excited(c, j) || model.exchange(i, j) == 0.0) continue;
          const Config hopped = c ^ (Config{1} << i) ^ (Config{1} << j);
          const std::size_t m = basis.index(hopped);
          if (m == SubspaceBasis::npos) continue;
          triplets.emplace_back(static_cast<Eigen::Index>(m), k, model.exchange(i, j));
        }
      }
    }
  }
  RealSparse h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

Eigen::MatrixXd van_vleck_oracle(const ExactHamiltonian& exact, Sector sector,
                                 double singular_tol) {
  const bool supported =
      sector.kind == Sector::Kind::Dimer ||
      (sector.kind == Sector::Kind::ExcitationNumber &&
       (sector.excitations == 1 || sector.excitations == 2));
  if (!supported)
    throw ValidationError("van Vleck oracle supports n=1, n=2 and dimer sectors");

  const int n_sites = exact.basis->n_sites();
  auto model_space = SubspaceBasis::get(n_sites, sector);
  const auto& full = *exact.basis;
  const RealSparse& h = exact.matrix;
  const Eigen::VectorXd h0 = h.diagonal();

  std::vector<std::size_t> full_index(model_space->dim());
  std::vector<long> model_of_full(full.dim(), -1);
  for (std::size_t a = 0; a < model_space->dim(); ++a) {
    full_index[a] = full.index(model_space->state(a));
    model_of_full[full_index[a]] = static_cast<long>(a);
  }

  const auto dim = static_cast<Eigen::Index>(model_space->dim());
  Eigen::MatrixXd heff = Eigen::MatrixXd::Zero(dim, dim);
  double scale = h0.cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = 1.0;

  // Collect, for each residual state m, its couplings into the model space;
  // every pair (a, b) of those contributes through m.
  std::vector<std::vector<std::pair<Eigen::Index, double>>> touch(full.dim());
  for (Eigen::Index a = 0; a < dim; ++a) {
    const auto row = static_cast<Eigen::Index>(full_index[a]);
    for (RealSparse::InnerIterator it(h, row); it; ++it) {
      if (it.col() == row || it.value() == 0.0) continue;
      if (model_of_full[it.col()] >= 0) continue;
      touch[it.col()].emplace_back(a, it.value());
    }
  }
  for (std::size_t m = 0; m < full.dim(); ++m) {
    const auto& links = touch[m];
    for (const auto& [a, va] : links) {
      const double ea = h0[full_index[a]];
      const double da = ea - h0[m];
      if (std::abs(da) < singular_tol * scale)
        throw SingularDenominatorError("vanishing energy denominator between model state " +
                                       std::to_string(a) + " and residual state " +
                                       std::to_string(m));
      for (const auto& [b, vb] : links) {
        const double db = h0[full_index[b]] - h0[m];
        heff(a, b) += 0.5 * va * vb * (1.0 / da + 1.0 / db);
      }
    }
  }
  double constant = 0.0;
  for (int j = 0; j < n_sites; ++j)
    constant += exact.rabi[j] * exact.rabi[j] / (4.0 * exact.detuning[j]);
  for (Eigen::Index a = 0; a < dim; ++a) heff(a, a) += h0[full_index[a]] + constant;
  return heff;
}

}  // namespace rydex
