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

#include "rydex/observables.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "rydex/error.hpp"

namespace rydex {

using cplx = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void ObservableSeries::append(double t, const MatrixXd& value) {
  if (!times.empty() && !(t > times.back()))
    throw ValidationError("observable times must be strictly increasing");
  if (!values.empty() &&
      (value.rows() != values.front().rows() || value.cols() != values.front().cols()))
    throw ValidationError("observable record shape changed within a series");
  times.push_back(t);
  values.push_back(value);
}

VectorXd density_profile(const QuantumState& psi) {
  const int n = psi.basis->n_sites();
  VectorXd out = VectorXd::Zero(n);
  for (std::size_t a = 0; a < psi.basis->dim(); ++a) {
    const double w = std::norm(psi.amplitudes[a]);
    if (w == 0.0) continue;
    const Config c = psi.basis->state(a);
    for (int i = 0; i < n; ++i)
      if (is_excited(c, i)) out[i] += w;
  }
  return out;
}

VectorXd density_profile(const DensityOperator& rho) {
  const int n = rho.basis->n_sites();
  VectorXd out = VectorXd::Zero(n);
  for (std::size_t a = 0; a < rho.basis->dim(); ++a) {
    const double w = rho.matrix(a, a).real();
    const Config c = rho.basis->state(a);
    for (int i = 0; i < n; ++i)
      if (is_excited(c, i)) out[i] += w;
  }
  return out;
}

namespace {

template <typename Weight>
MatrixXd g2_from_weights(const SubspaceBasis& basis, Weight&& weight) {
  const int n = basis.n_sites();
  MatrixXd g = MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < basis.dim(); ++a) {
    const Config c = basis.state(a);
    if (excitation_count(c) < 2) continue;
    const double w = weight(a);
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      if (!is_excited(c, i)) continue;
      for (int j = i + 1; j < n; ++j)
        if (is_excited(c, j)) {
          g(i, j) += w;
          g(j, i) += w;
        }
    }
  }
  return g;
}

}  // namespace

MatrixXd g2_correlation(const QuantumState& psi) {
  return g2_from_weights(*psi.basis, [&](std::size_t a) { return std::norm(psi.amplitudes[a]); });
}

MatrixXd g2_correlation(const DensityOperator& rho) {
  return g2_from_weights(*rho.basis, [&](std::size_t a) { return rho.matrix(a, a).real(); });
}

MatrixXd normalize_to_max(const MatrixXd& m) {
  const double top = m.maxCoeff();
  return top > 0.0 ? MatrixXd(m / top) : m;
}

VectorXd g2_diagonal_weights(const MatrixXd& g2) {
  const Eigen::Index n = g2.rows();
  VectorXd w = VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) w[j - i] += g2(i, j);
  return w;
}

namespace {

void check_pair(const SubspaceBasis& basis, int i, int j) {
  const int n = basis.n_sites();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw InvalidPairError("reduced density matrix needs two distinct sites in range");
}

int local_index(Config c, int i, int j) {
  return 2 * static_cast<int>(is_excited(c, i)) + static_cast<int>(is_excited(c, j));
}

}  // namespace

Eigen::Matrix4cd reduced_two_site(const QuantumState& psi, int i, int j) {
  check_pair(*psi.basis, i, j);
  const Config mask = (Config{1} << i) | (Config{1} << j);
  std::unordered_map<Config, Eigen::Vector4cd> groups;
  for (std::size_t a = 0; a < psi.basis->dim(); ++a) {
    const cplx amp = psi.amplitudes[a];
    if (amp == cplx(0.0)) continue;
    const Config c = psi.basis->state(a);
    auto [it, inserted] = groups.try_emplace(c & ~mask, Eigen::Vector4cd::Zero());
    it->second[local_index(c, i, j)] += amp;
  }
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& [key, v] : groups) rho += v * v.adjoint();
  return rho;
}

Eigen::Matrix4cd reduced_two_site(const DensityOperator& rho, int i, int j) {
  check_pair(*rho.basis, i, j);
  const Config mask = (Config{1} << i) | (Config{1} << j);
  std::unordered_map<Config, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < rho.basis->dim(); ++a)
    groups[rho.basis->state(a) & ~mask].push_back(a);
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (const auto& [key, members] : groups)
    for (const std::size_t a : members)
      for (const std::size_t b : members)
        out(local_index(rho.basis->state(a), i, j), local_index(rho.basis->state(b), i, j)) +=
            rho.matrix(a, b);
  return out;
}

double concurrence(const Eigen::Matrix4cd& rho2) {
  if ((rho2 - rho2.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("concurrence input is not Hermitian");
  if (rho2.trace().real() < -1e-12)
    throw ValidationError("concurrence input has negative trace");
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Eigen::Matrix4cd herm = 0.5 * (rho2 + rho2.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho =
      es.eigenvectors() * ev.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix4cd tilde = yy * herm.conjugate() * yy;
  Eigen::Matrix4cd m = sqrt_rho * tilde * sqrt_rho;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::Vector4d lam = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(m, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .cwiseMax(0.0)
                            .cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double transfer_fidelity(const QuantumState& psi, const QuantumState& target) {
  const QuantumState t = target.embed(psi.basis);
  return std::norm(t.amplitudes.dot(psi.amplitudes));
}

double transfer_fidelity(const DensityOperator& rho, const QuantumState& target) {
  const QuantumState t = target.embed(rho.basis);
  return t.amplitudes.dot(rho.matrix * t.amplitudes).real();
}

DisplacementStats displacement_stats(const std::vector<VectorXd>& profiles, double reference,
                                     double unit) {
  DisplacementStats out;
  for (const auto& p : profiles) {
    const double total = p.sum();
    if (!(total > 0.0)) throw ValidationError("empty density profile");
    double m1 = 0.0;
    double m2 = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double x = (static_cast<double>(i) - reference) / unit;
      m1 += p[i] * x;
      m2 += p[i] * x * x;
    }
    out.mean.push_back(m1 / total);
    out.mean_square.push_back(m2 / total);
  }
  return out;
}

DisplacementStats tracked_displacement(const std::vector<VectorXd>& profiles, double reference,
                                       double unit) {
  DisplacementStats out;
  double center = reference;  // unwrapped
  for (const auto& p : profiles) {
    const double total = p.sum();
    if (!(total > 0.0)) throw ValidationError("empty density profile");
    const auto n = static_cast<double>(p.size());
    auto offset = [&](Eigen::Index i, double c) {
      double d = std::fmod(static_cast<double>(i) - c, n);
      if (d > 0.5 * n) d -= n;
      if (d <= -0.5 * n) d += n;
      return d;
    };
    for (int iter = 0; iter < 3; ++iter) {
      double shift = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) shift += p[i] * offset(i, center);
      center += shift / total;
    }
    double m2 = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double x = (center + offset(i, center) - reference) / unit;
      m2 += p[i] * x * x;
    }
    out.mean.push_back((center - reference) / unit);
    out.mean_square.push_back(m2 / total);
  }
  return out;
}

double bessel_profile(double x, double center, double amplitude, double z) {
  const double j = std::cyl_bessel_j(std::abs(x - center), std::abs(z));
  return amplitude * j * j;
}

namespace {

struct CurveFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;

  std::function<double(double, const VectorXd&)> model;
  const VectorXd* x = nullptr;
  const VectorXd* y = nullptr;
  int n_params = 0;

  int inputs() const { return n_params; }
  int values() const { return static_cast<int>(x->size()); }
  int operator()(const VectorXd& p, VectorXd& r) const {
    for (Eigen::Index k = 0; k < x->size(); ++k) r[k] = model((*x)[k], p) - (*y)[k];
    return 0;
  }
};

FitResult fit_family(const std::string& family,
                     std::function<double(double, const VectorXd&)> model, const VectorXd& x, const VectorXd& y, const std::vector<VectorXd>& starts) {
  FitResult best;
  best.family = family;
  best.ssr = std::numeric_limits<double>::infinity();
  CurveFunctor f;
  f.model = std::move(model);
  f.x = &x;
  f.y = &y;
  for (const auto& start : starts) {
    f.n_params = static_cast<int>(start.size());
    Eigen::NumericalDiff<CurveFunctor> numdiff(f);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<CurveFunctor>> lm(numdiff);
    VectorXd p = start;
    lm.minimize(p);
    VectorXd r(x.size());
    f(p, r);
    const double ssr = r.squaredNorm();
    if (std::isfinite(ssr) && ssr < best.ssr) {
      best.ssr = ssr;
      best.params = p;
      best.fitted = true;
    }
  }
  if (!best.fitted) best.notice = "no start converged to a finite residual";
  return best;
}

}  // namespace

ComDistribution com_distribution(const MatrixXd& g2, double center) {
  const Eigen::Index n = g2.rows();
  if (n < 2 || g2.cols() != n) throw ValidationError("g2 must be a square matrix over >= 2 sites");
  ComDistribution out;
  out.center = center;
  const Eigen::Index bins = 2 * n - 3;  // (i + j)/2 for i < j spans 0.5 .. n - 1.5
  out.positions.resize(bins);
  out.probability = VectorXd::Zero(bins);
  for (Eigen::Index k = 0; k < bins; ++k) out.positions[k] = 0.5 * static_cast<double>(k + 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.probability[i + j - 1] += g2(i, j);
  const double total = out.probability.sum();
  if (!(total > 0.0)) throw ValidationError("g2 carries no pair weight");
  out.probability /= total;

  std::vector<Eigen::Index> lattice;
  for (Eigen::Index k = 0; k < bins; ++k) {
    const double off = out.positions[k] - center;
    if (std::abs(off - std::round(off)) < 1e-9)
      lattice.push_back(k);
    else
      out.off_lattice += out.probability[k];
  }
  VectorXd x(static_cast<Eigen::Index>(lattice.size()));
  VectorXd y(x.size());
  int support = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    x[k] = out.positions[lattice[k]];
    y[k] = out.probability[lattice[k]];
    if (y[k] > 1e-12) ++support;
  }
  if (support < 2) {
    out.bessel.family = "bessel";
    out.gaussian.family = "gaussian";
    out.bessel.notice = out.gaussian.notice = "degenerate single-point distribution; fit skipped";
    return out;
  }

  const double mass = y.sum();
  const double mean = x.dot(y) / mass;
  const double var = std::max((x.array() - mean).square().matrix().dot(y) / mass, 1e-6);
  const double peak = y.maxCoeff();

  std::vector<VectorXd> bessel_starts;
  for (const double z : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0}) {
    VectorXd s(2);
    s << peak, z;
    bessel_starts.push_back(s);
  }
  out.bessel = fit_family(
      "bessel",
      [center](double xx, const VectorXd& p) { return bessel_profile(xx, center, p[0], p[1]); }, x,
      y, bessel_starts);

  std::vector<VectorXd> gauss_starts;
  for (const double scale : {0.5, 1.0, 2.0}) {
    VectorXd s(3);
    s << peak, mean, std::sqrt(var) * scale;
    gauss_starts.push_back(s);
  }
  out.gaussian = fit_family(
      "gaussian",
      [](double xx, const VectorXd& p) {
        const double s = p[2];
        return p[0] * std::exp(-0.5 * (xx - p[1]) * (xx - p[1]) / (s * s));
      },
      x, y, gauss_starts);
  return out;
}

}  // namespace rydex
