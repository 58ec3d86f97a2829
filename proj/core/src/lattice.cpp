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

#include "rydex/lattice.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rydex/error.hpp"

namespace rydex {

ChainSpec ChainSpec::uniform(int n_sites, double spacing, double c6,
                             double disorder_sigma, Boundary boundary) {
  ChainSpec spec;
  spec.n_sites = n_sites;
  spec.spacing = spacing;
  spec.c6 = c6;
  spec.disorder_sigma = disorder_sigma;
  spec.boundary = boundary;
  spec.positions.resize(n_sites > 0 ? n_sites : 0);
  for (int i = 0; i < n_sites; ++i) spec.positions[i] = i * spacing;
  spec.validate();
  return spec;
}

ChainSpec ChainSpec::from_nn_shift(int n_sites, double spacing, double v_nn,
                                   double disorder_sigma, Boundary boundary) {
  return uniform(n_sites, spacing, v_nn * std::pow(spacing, 6),
                 disorder_sigma, boundary);
}

void ChainSpec::validate() const {
  if (n_sites < 2) throw ValidationError("chain needs at least two sites");
  if (!(spacing > 0.0)) throw ValidationError("chain spacing must be positive");
  if (disorder_sigma < 0.0)
    throw ValidationError("disorder sigma must be non-negative");
  if (static_cast<int>(positions.size()) != n_sites)
    throw ValidationError("position count does not match n_sites");
  for (int i = 1; i < n_sites; ++i) {
    if (!(positions[i] > positions[i - 1]))
      throw ValidationError("positions must be strictly increasing (site " +
                            std::to_string(i) + ")");
  }
  if (boundary == Boundary::Periodic &&
      !(positions.back() - positions.front() < ring_length()))
    throw ValidationError("positions overlap across the periodic seam");
}

double ChainSpec::separation(int i, int j) const {
  double r = std::abs(positions[i] - positions[j]);
  if (boundary == Boundary::Periodic) r = std::min(r, ring_length() - r);
  return r;
}

int ChainSpec::index_distance(int i, int j) const {
  int d = std::abs(i - j);
  if (boundary == Boundary::Periodic) d = std::min(d, n_sites - d);
  return d;
}

double vdw_interaction(const ChainSpec& chain, int i, int j) {
  if (i == j)
    throw InvalidPairError("vdw_interaction needs two distinct sites, got " +
                           std::to_string(i) + " twice");
  if (i < 0 || j < 0 || i >= chain.n_sites || j >= chain.n_sites)
    throw InvalidPairError("site index out of range");
  const double r = chain.separation(i, j);
  return chain.c6 / std::pow(r, 6);
}

ChainSpec sample_disorder(const ChainSpec& chain, std::uint64_t seed,
                          int max_retries) {
  if (chain.disorder_sigma < 0.0)
    throw ValidationError("disorder sigma must be non-negative");
  if (chain.disorder_sigma == 0.0) return chain;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, chain.disorder_sigma);
  ChainSpec out = chain;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    for (int i = 0; i < chain.n_sites; ++i)
      out.positions[i] = chain.positions[i] + noise(rng);
    bool ordered = true;
    for (int i = 1; i < chain.n_sites && ordered; ++i)
      ordered = out.positions[i] > out.positions[i - 1];
    if (ordered && chain.boundary == Boundary::Periodic)
      ordered = out.positions.back() - out.positions.front() < out.ring_length();
    if (ordered) return out;
  }
  throw DisorderSamplingError("could not draw an ordered disorder realization");
}

double TanhRamp::phase(double t) const {
  const double half = 0.5 * steepness;
  return std::numbers::pi *
         (0.5 + std::tanh(steepness * (t / period - 0.5)) / (2.0 * std::tanh(half)));
}

Schedule Schedule::constant(double value) {
  Schedule s;
  s.kind_ = Kind::Constant;
  s.amplitude_ = value;
  return s;
}

Schedule Schedule::sin2_ramp(double amplitude, double offset, TanhRamp ramp) {
  Schedule s;
  s.kind_ = Kind::Sin2Ramp;
  s.amplitude_ = amplitude;
  s.offset_ = offset;
  s.ramp_ = ramp;
  return s;
}

double Schedule::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return amplitude_;
    case Kind::Sin2Ramp: {
      const double s = std::sin(ramp_.phase(t) + offset_);
      return amplitude_ * s * s;
    }
  }
  return amplitude_;
}

DressingProfile DressingProfile::homogeneous(int n_sites, double rabi,
                                             double detuning) {
  DressingProfile p;
  p.rabi.assign(n_sites, Schedule::constant(rabi));
  p.detuning.assign(n_sites, Schedule::constant(detuning));
  return p;
}

DressingProfile DressingProfile::from_values(const Eigen::VectorXd& rabi,
                                             const Eigen::VectorXd& detuning) {
  if (rabi.size() != detuning.size())
    throw ValidationError("rabi and detuning vectors differ in length");
  DressingProfile p;
  for (Eigen::Index i = 0; i < rabi.size(); ++i) {
    p.rabi.push_back(Schedule::constant(rabi[i]));
    p.detuning.push_back(Schedule::constant(detuning[i]));
  }
  return p;
}

bool DressingProfile::time_dependent() const {
  for (const auto& s : rabi)
    if (!s.is_constant()) return true;
  for (const auto& s : detuning)
    if (!s.is_constant()) return true;
  return false;
}

Eigen::VectorXd DressingProfile::rabi_at(double t) const {
  Eigen::VectorXd v(n_sites());
  for (int i = 0; i < n_sites(); ++i) v[i] = rabi[i](t);
  return v;
}

Eigen::VectorXd DressingProfile::detuning_at(double t) const {
  Eigen::VectorXd v(n_sites());
  for (int i = 0; i < n_sites(); ++i) v[i] = detuning[i](t);
  return v;
}

void DressingProfile::validate(double t) const {
  if (rabi.size() != detuning.size())
    throw ValidationError("rabi and detuning schedules differ in length");
  for (int i = 0; i < n_sites(); ++i) {
    if (rabi[i](t) < 0.0)
      throw ValidationError("negative Rabi frequency at site " + std::to_string(i));
    if (detuning[i](t) == 0.0)
      throw ValidationError("zero detuning at site " + std::to_string(i));
  }
}

void NoiseSpec::validate() const {
  if (dephasing_gamma < 0.0 || decay_kappa < 0.0)
    throw ValidationError("noise rates must be non-negative");
}

}  // namespace rydex
