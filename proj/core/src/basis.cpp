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

#include "rydex/basis.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <mutex>

#include "rydex/error.hpp"

namespace rydex {

namespace {

constexpr int kMaxFullSites = 24;
constexpr int kMaxSites = 62;

void enumerate_combinations(int n_sites, int k, std::vector<Config>& out) {
  if (k == 0) {
    out.push_back(0);
    return;
  }
  // Gosper's hack walks all k-bit masks in ascending order.
  Config c = (Config{1} << k) - 1;
  const Config limit = Config{1} << n_sites;
  while (c < limit) {
    out.push_back(c);
    const Config lowest = c & (~c + 1);
    const Config ripple = c + lowest;
    c = (((ripple ^ c) >> 2) / lowest) | ripple;
  }
}

}  // namespace

std::string Sector::name() const {
  switch (kind) {
    case Kind::Full:
      return "full";
    case Kind::ExcitationNumber:
      return "n=" + std::to_string(excitations);
    case Kind::Dimer:
      return "dimer";
  }
  return "?";
}

SubspaceBasis::SubspaceBasis(int n_sites, Sector sector)
    : n_sites_(n_sites), sector_(sector) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw ValidationError("unsupported site count " + std::to_string(n_sites));
  switch (sector.kind) {
    case Sector::Kind::Full: {
      if (n_sites > kMaxFullSites)
        throw DimensionCapError("full basis limited to " +
                                std::to_string(kMaxFullSites) + " sites");
      const Config dim = Config{1} << n_sites;
      states_.resize(dim);
      for (Config c = 0; c < dim; ++c) states_[c] = c;
      break;
    }
    case Sector::Kind::ExcitationNumber: {
      if (sector.excitations < 0 || sector.excitations > n_sites)
        throw EmptySectorError("excitation number " +
                               std::to_string(sector.excitations) +
                               " is outside 0.." + std::to_string(n_sites));
      enumerate_combinations(n_sites, sector.excitations, states_);
      break;
    }
    case Sector::Kind::Dimer: {
      if (n_sites < 2) throw EmptySectorError("dimer sector needs two sites");
      for (int i = 0; i + 1 < n_sites; ++i)
        states_.push_back((Config{1} << i) | (Config{1} << (i + 1)));
      break;
    }
  }
}

BasisPtr SubspaceBasis::get(int n_sites, Sector sector) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, BasisPtr> cache;
  const auto key = std::make_tuple(n_sites, static_cast<int>(sector.kind),
                                   sector.excitations);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const SubspaceBasis>(n_sites, sector);
  cache.emplace(key, basis);
  return basis;
}

std::size_t SubspaceBasis::index(Config c) const {
  if (sector_.kind == Sector::Kind::Full)
    return c < states_.size() ? static_cast<std::size_t>(c) : npos;
  auto it = std::lower_bound(states_.begin(), states_.end(), c);
  if (it == states_.end() || *it != c) return npos;
  return static_cast<std::size_t>(it - states_.begin());
}

QuantumState QuantumState::basis_state(BasisPtr basis, Config c) {
  const std::size_t k = basis->index(c);
  if (k == SubspaceBasis::npos)
    throw ValidationError("configuration not in basis " + basis->sector().name());
  QuantumState psi{basis, Eigen::VectorXcd::Zero(basis->dim())};
  psi.amplitudes[k] = 1.0;
  return psi;
}

QuantumState QuantumState::superposition(
    BasisPtr basis,
    const std::vector<std::pair<Config, std::complex<double>>>& terms) {
  QuantumState psi{basis, Eigen::VectorXcd::Zero(basis->dim())};
  for (const auto& [c, amp] : terms) {
    const std::size_t k = basis->index(c);
    if (k == SubspaceBasis::npos)
      throw ValidationError("configuration not in basis " + basis->sector().name());
    psi.amplitudes[k] += amp;
  }
  psi.normalize();
  return psi;
}

void QuantumState::normalize() {
  const double n = amplitudes.norm();
  if (n == 0.0) throw ValidationError("cannot normalize a zero state");
  amplitudes /= n;
}

QuantumState QuantumState::embed(BasisPtr target) const {
  QuantumState out{target, Eigen::VectorXcd::Zero(target->dim())};
  for (std::size_t k = 0; k < basis->dim(); ++k) {
    const std::size_t m = target->index(basis->state(k));
    if (m != SubspaceBasis::npos) out.amplitudes[m] = amplitudes[k];
  }
  return out;
}

DensityOperator DensityOperator::pure(const QuantumState& psi) {
  return {psi.basis, psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityOperator::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator DensityOperator::embed(BasisPtr target) const {
  std::vector<std::size_t> map(basis->dim());
  for (std::size_t k = 0; k < basis->dim(); ++k)
    map[k] = target->index(basis->state(k));
  DensityOperator out{target, Eigen::MatrixXcd::Zero(target->dim(), target->dim())};
  for (std::size_t a = 0; a < basis->dim(); ++a) {
    if (map[a] == SubspaceBasis::npos) continue;
    for (std::size_t b = 0; b < basis->dim(); ++b) {
      if (map[b] == SubspaceBasis::npos) continue;
      out.matrix(map[a], map[b]) = matrix(a, b);
    }
  }
  return out;
}

namespace {

Projection finish_projection(BasisPtr sector_basis, Eigen::MatrixXcd block,
                             ProjectionMode mode, double floor) {
  const double p = block.diagonal().real().sum();
  if (!(p > floor))
    throw EmptyPostSelectionError(
        "post-selection probability " + std::to_string(p) + " below floor", p);
  if (mode == ProjectionMode::Diagonal) {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(block.rows(), block.cols());
    diag.diagonal() = block.diagonal().real().cast<std::complex<double>>();
    block = std::move(diag);
  }
  block /= p;
  return {DensityOperator{std::move(sector_basis), std::move(block)}, p};
}

}  // namespace

Projection project_to_sector(const DensityOperator& rho, int n,
                             ProjectionMode mode, double floor) {
  const int n_sites = rho.basis->n_sites();
  if (n < 0 || n > n_sites)
    throw EmptySectorError("sector n=" + std::to_string(n) + " does not exist");
  auto target = SubspaceBasis::get(n_sites, Sector::excitation_number(n));
  std::vector<std::size_t> src(target->dim());
  for (std::size_t k = 0; k < target->dim(); ++k)
    src[k] = rho.basis->index(target->state(k));
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(target->dim(), target->dim());
  for (std::size_t a = 0; a < target->dim(); ++a) {
    if (src[a] == SubspaceBasis::npos) continue;
    if (mode == ProjectionMode::Diagonal) {
      block(a, a) = rho.matrix(src[a], src[a]);
      continue;
    }
    for (std::size_t b = 0; b < target->dim(); ++b)
      if (src[b] != SubspaceBasis::npos) block(a, b) = rho.matrix(src[a], src[b]);
  }
  return finish_projection(std::move(target), std::move(block), mode, floor);
}

Projection project_to_sector(const QuantumState& psi, int n,
                             ProjectionMode mode, double floor) {
  const int n_sites = psi.basis->n_sites();
  if (n < 0 || n > n_sites)
    throw EmptySectorError("sector n=" + std::to_string(n) + " does not exist");
  auto target = SubspaceBasis::get(n_sites, Sector::excitation_number(n));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(target->dim());
  for (std::size_t k = 0; k < target->dim(); ++k) {
    const std::size_t s = psi.basis->index(target->state(k));
    if (s != SubspaceBasis::npos) v[k] = psi.amplitudes[s];
  }
  Eigen::MatrixXcd block;
  if (mode == ProjectionMode::Diagonal) {
    block = Eigen::MatrixXcd::Zero(v.size(), v.size());
    block.diagonal() = v.cwiseAbs2().cast<std::complex<double>>();
  } else {
    block = v * v.adjoint();
  }
  return finish_projection(std::move(target), std::move(block), mode, floor);
}

Eigen::VectorXd sector_probabilities(const DensityOperator& rho) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(rho.basis->n_sites() + 1);
  for (std::size_t k = 0; k < rho.basis->dim(); ++k)
    p[excitation_count(rho.basis->state(k))] += rho.matrix(k, k).real();
  return p;
}

Eigen::VectorXd sector_probabilities(const QuantumState& psi) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(psi.basis->n_sites() + 1);
  for (std::size_t k = 0; k < psi.basis->dim(); ++k)
    p[excitation_count(psi.basis->state(k))] += std::norm(psi.amplitudes[k]);
  return p;
}

}  // namespace rydex
