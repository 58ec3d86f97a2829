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

#ifndef RYDEX_OBSERVABLES_HPP
#define RYDEX_OBSERVABLES_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydex/basis.hpp"

namespace rydex {

/// Time series of scalar, vector or matrix records of fixed shape.
struct ObservableSeries {
  std::string name;
  std::string note;
  /// Optional labels of the flattened record entries.
  std::vector<std::string> columns;
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> values;

  void append(double t, const Eigen::MatrixXd& value);
  Eigen::Index rows() const { return values.empty() ? 0 : values.front().rows(); }
  Eigen::Index cols() const { return values.empty() ? 0 : values.front().cols(); }
};

/// <n_i> per site.
Eigen::VectorXd density_profile(const QuantumState& psi);
Eigen::VectorXd density_profile(const DensityOperator& rho);

/// g2_ij = <n_i n_j> for i != j, zero on the diagonal.
Eigen::MatrixXd g2_correlation(const QuantumState& psi);
Eigen::MatrixXd g2_correlation(const DensityOperator& rho);
/// Divides by the largest entry (returns the input when it is all zero).
Eigen::MatrixXd normalize_to_max(const Eigen::MatrixXd& m);
/// Total g2 weight on each diagonal |i - j| = d, for d = 0..N-1, summed over i < j.
Eigen::VectorXd g2_diagonal_weights(const Eigen::MatrixXd& g2);

/// Two-site reduced density matrix in the basis |n_i n_j> = |00>, |01>, |10>, |11>,
/// where 1 marks the Rydberg state.
Eigen::Matrix4cd reduced_two_site(const QuantumState& psi, int i, int j);
Eigen::Matrix4cd reduced_two_site(const DensityOperator& rho, int i, int j);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Eigen::Matrix4cd& rho2);

/// |<target|psi>|^2, or <target|rho|target> for mixed states. The target is
/// re-expressed over the state's basis first.
double transfer_fidelity(const QuantumState& psi, const QuantumState& target);
double transfer_fidelity(const DensityOperator& rho, const QuantumState& target);

struct DisplacementStats {
  std::vector<double> mean;         // <x>
  std::vector<double> mean_square;  // <x^2>
};

/// First and second moments of normalized site distributions relative to
/// `reference`, divided by `unit` (1 for sites, 3 for a three-site cell).
DisplacementStats displacement_stats(const std::vector<Eigen::VectorXd>& profiles,
                                     double reference, double unit = 1.0);

/// Ring version: positions are unwrapped by following the distribution's
/// center from sample to sample using minimal-image offsets.
DisplacementStats tracked_displacement(const std::vector<Eigen::VectorXd>& profiles,
                                       double reference, double unit = 1.0);

struct FitResult {
  bool fitted = false;
  std::string family;
  Eigen::VectorXd params;  // Bessel: (amplitude, z); Gaussian: (amplitude, mean, sigma)
  double ssr = 0.0;        // sum of squared residuals
  std::string notice;
};

struct ComDistribution {
  Eigen::VectorXd positions;    // (i + j)/2 on the half-site grid
  Eigen::VectorXd probability;  // normalized to unit sum
  double center = 0.0;          // Bessel fit center
  double off_lattice = 0.0;     // weight on bins at half-integer offsets from center
  FitResult bessel;
  FitResult gaussian;
};

/// amplitude * J_{|x - center|}(z)^2
double bessel_profile(double x, double center, double amplitude, double z);

/// Marginal distribution of the pair center of mass taken from g2 (i < j),
/// fitted to the squared-Bessel family centered at `center` and to a Gaussian.
/// Both fits use only the bins at integer offsets from `center`, where the
/// Bessel family is defined.
ComDistribution com_distribution(const Eigen::MatrixXd& g2, double center);

}  // namespace rydex

#endif  // RYDEX_OBSERVABLES_HPP
