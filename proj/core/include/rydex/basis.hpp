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

#ifndef RYDEX_BASIS_HPP
#define RYDEX_BASIS_HPP

#include <bit>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rydex {

/// A configuration is the set of excited sites; site 0 is the least
/// significant bit.
using Config = std::uint64_t;

inline int excitation_count(Config c) { return std::popcount(c); }
inline bool is_excited(Config c, int site) { return (c >> site) & 1U; }

struct Sector {
  enum class Kind { Full, ExcitationNumber, Dimer };

  Kind kind = Kind::Full;
  int excitations = 0;  // only meaningful for ExcitationNumber

  static Sector full() { return {Kind::Full, 0}; }
  static Sector excitation_number(int n) { return {Kind::ExcitationNumber, n}; }
  static Sector dimer() { return {Kind::Dimer, 2}; }

  std::string name() const;
  bool operator==(const Sector&) const = default;
};

class SubspaceBasis;
using BasisPtr = std::shared_ptr<const SubspaceBasis>;

/// Indexed set of configurations, ordered by ascending bitmask.
class SubspaceBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  SubspaceBasis(int n_sites, Sector sector);

  /// Shared, cached instance for (n_sites, sector).
  static BasisPtr get(int n_sites, Sector sector);

  int n_sites() const { return n_sites_; }
  const Sector& sector() const { return sector_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<Config>& states() const { return states_; }
  Config state(std::size_t k) const { return states_[k]; }

  /// Ordinal of a configuration, or npos when it is not in the basis.
  std::size_t index(Config c) const;
  bool contains(Config c) const { return index(c) != npos; }

 private:
  int n_sites_;
  Sector sector_;
  std::vector<Config> states_;
};

struct QuantumState {
  BasisPtr basis;
  Eigen::VectorXcd amplitudes;

  static QuantumState basis_state(BasisPtr basis, Config c);
  /// Normalized sum_k c_k |k> from (configuration, coefficient) pairs.
  static QuantumState superposition(
      BasisPtr basis, const std::vector<std::pair<Config, std::complex<double>>>& terms);

  double norm() const { return amplitudes.norm(); }
  void normalize();
  /// Re-expresses the state over another basis; amplitudes outside it are dropped.
  QuantumState embed(BasisPtr target) const;
};

struct DensityOperator {
  BasisPtr basis;
  Eigen::MatrixXcd matrix;

  static DensityOperator pure(const QuantumState& psi);

  std::complex<double> trace() const { return matrix.trace(); }
  double hermiticity_error() const;
  DensityOperator embed(BasisPtr target) const;
};

enum class ProjectionMode {
  /// rho_p = p^-1 sum_k p_k |k><k| over the sector configurations.
  Diagonal,
  /// rho_p = P rho P / p, keeping coherences inside the sector.
  Coherent,
};

struct Projection {
  DensityOperator rho;
  double probability = 0.0;
};

inline constexpr double kDefaultPostSelectionFloor = 1e-12;

/// Post-selects rho on the n-exciton sector. Throws EmptySectorError when
/// n > N and EmptyPostSelectionError when p falls below floor.
Projection project_to_sector(const DensityOperator& rho, int n,
                             ProjectionMode mode = ProjectionMode::Diagonal,
                             double floor = kDefaultPostSelectionFloor);
Projection project_to_sector(const QuantumState& psi, int n,
                             ProjectionMode mode = ProjectionMode::Diagonal,
                             double floor = kDefaultPostSelectionFloor);

/// Probability of finding n excitations, for n = 0..N.
Eigen::VectorXd sector_probabilities(const DensityOperator& rho);
Eigen::VectorXd sector_probabilities(const QuantumState& psi);

}  // namespace rydex

#endif  // RYDEX_BASIS_HPP
