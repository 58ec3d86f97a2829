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

#ifndef RYDEX_LATTICE_HPP
#define RYDEX_LATTICE_HPP

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace rydex {

// Units: energies and rates are angular frequencies in rad/us, times in us,
// lengths in um.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular rate for a frequency quoted as X/2pi = mhz MHz.
constexpr double angular_mhz(double mhz) { return kTwoPi * mhz; }

enum class Boundary { Open, Periodic };

struct ChainSpec {
  int n_sites = 0;
  double spacing = 0.0;         // um
  double c6 = 0.0;              // rad/us * um^6
  std::vector<double> positions;  // um, along the chain axis
  double disorder_sigma = 0.0;  // um
  Boundary boundary = Boundary::Open;

  /// Evenly spaced chain with positions i * spacing.
  static ChainSpec uniform(int n_sites, double spacing, double c6,
                           double disorder_sigma = 0.0,
                           Boundary boundary = Boundary::Open);

  /// Evenly spaced chain whose C6 is fixed by the nearest-neighbour shift V(d).
  static ChainSpec from_nn_shift(int n_sites, double spacing, double v_nn,
                                 double disorder_sigma = 0.0,
                                 Boundary boundary = Boundary::Open);

  void validate() const;

  /// Physical separation |r_i - r_j| (minimal image on a ring).
  double separation(int i, int j) const;

  /// Separation in lattice steps (minimal image on a ring).
  int index_distance(int i, int j) const;

  double ring_length() const { return n_sites * spacing; }
};

/// V(r_ij) = C6 / |r_i - r_j|^6. Throws InvalidPairError for i == j.
double vdw_interaction(const ChainSpec& chain, int i, int j);

/// Copy of the chain with each position shifted by N(0, sigma^2) noise.
/// Draws that break strict ordering are redrawn up to max_retries times.
ChainSpec sample_disorder(const ChainSpec& chain, std::uint64_t seed,
                          int max_retries = 1000);

/// phi(t) = pi * (1/2 + tanh[s (t/T - 1/2)] / (2 tanh(s/2))), so phi(0) = 0
/// and phi(T) = pi.
struct TanhRamp {
  double period = 1.0;
  double steepness = 5.6;

  double phase(double t) const;
};

/// Per-site control schedule evaluated lazily at integrator time points.
class Schedule {
 public:
  enum class Kind { Constant, Sin2Ramp };

  Schedule() = default;
  static Schedule constant(double value);
  /// amplitude * sin^2(phi(t) + offset) with phi from the ramp.
  static Schedule sin2_ramp(double amplitude, double offset, TanhRamp ramp);

  double operator()(double t) const;
  bool is_constant() const { return kind_ == Kind::Constant; }

  Kind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double offset() const { return offset_; }
  const TanhRamp& ramp() const { return ramp_; }

 private:
  Kind kind_ = Kind::Constant;
  double amplitude_ = 0.0;
  double offset_ = 0.0;
  TanhRamp ramp_{};
};

struct DressingProfile {
  std::vector<Schedule> rabi;      // Omega_i(t), rad/us
  std::vector<Schedule> detuning;  // Delta_i(t), rad/us

  static DressingProfile homogeneous(int n_sites, double rabi, double detuning);
  static DressingProfile from_values(const Eigen::VectorXd& rabi,
                                     const Eigen::VectorXd& detuning);

  int n_sites() const { return static_cast<int>(rabi.size()); }
  bool time_dependent() const;

  Eigen::VectorXd rabi_at(double t) const;
  Eigen::VectorXd detuning_at(double t) const;

  /// Omega_i(t) >= 0 and Delta_i(t) != 0 for every site.
  void validate(double t) const;
};

struct NoiseSpec {
  double dephasing_gamma = 0.0;  // 1/us
  double decay_kappa = 0.0;      // 1/us

  void validate() const;
  bool is_closed() const { return dephasing_gamma == 0.0 && decay_kappa == 0.0; }
};

}  // namespace rydex

#endif  // RYDEX_LATTICE_HPP
