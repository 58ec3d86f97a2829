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

#include "rydex/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "ode.hpp"
#include "parallel.hpp"
#include "rydex/error.hpp"

namespace rydex {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

std::string method_name(Method m) {
  switch (m) {
    case Method::DenseExpm:
      return "dense-expm";
    case Method::AdaptiveRk:
      return "adaptive-rk";
    case Method::Krylov:
      return "krylov";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "dense-expm") return Method::DenseExpm;
  if (name == "adaptive-rk") return Method::AdaptiveRk;
  if (name == "krylov") return Method::Krylov;
  throw ValidationError("unknown evolution method '" + name + "'");
}

void EvolutionConfig::validate(bool trajectory_mode) const {
  if (!(t_final > 0.0)) throw ValidationError("t_final must be positive");
  if (!(dt_max > 0.0)) throw ValidationError("dt_max must be positive");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2))
    throw ValidationError("tolerances must lie in (0, 1e-2]");
  if (trajectory_mode && trajectory_count < 1)
    throw ValidationError("trajectory_count must be at least 1");
  if (krylov_dim < 2) throw ValidationError("krylov_dim must be at least 2");
  if (threads < 0) throw ValidationError("threads must be non-negative");
  if (output_times.empty()) {
    if (n_outputs < 2) throw ValidationError("n_outputs must be at least 2");
  } else {
    for (std::size_t k = 0; k < output_times.size(); ++k) {
      if (output_times[k] < 0.0 || output_times[k] > t_final)
        throw ValidationError("output time outside [0, t_final]");
      if (k > 0 && !(output_times[k] > output_times[k - 1]))
        throw ValidationError("output times must be strictly increasing");
    }
  }
}

std::vector<double> EvolutionConfig::sample_times() const {
  if (!output_times.empty()) return output_times;
  std::vector<double> t(n_outputs);
  for (int k = 0; k < n_outputs; ++k) t[k] = t_final * k / (n_outputs - 1);
  t.back() = t_final;
  return t;
}

HamiltonianHandle HamiltonianHandle::constant(BasisPtr basis, RealSparse matrix) {
  if (matrix.rows() != static_cast<Eigen::Index>(basis->dim()) ||
      matrix.cols() != matrix.rows())
    throw ValidationError("Hamiltonian does not match its basis dimension");
  HamiltonianHandle h;
  h.basis_ = std::move(basis);
  h.fixed_ = std::make_shared<const RealSparse>(std::move(matrix));
  return h;
}

HamiltonianHandle HamiltonianHandle::time_dependent(BasisPtr basis, Generator generator) {
  HamiltonianHandle h;
  h.basis_ = std::move(basis);
  h.generator_ = std::move(generator);
  return h;
}

HamiltonianHandle HamiltonianHandle::exact(const ChainSpec& chain,
                                           const DressingProfile& dressing) {
  auto builder = std::make_shared<ExactHamiltonianBuilder>(chain, dressing);
  if (!builder->time_dependent())
    return constant(builder->basis(), builder->at(0.0));
  auto mutex = std::make_shared<std::mutex>();
  return time_dependent(builder->basis(), [builder, mutex](double t) {
    std::lock_guard lock(*mutex);
    return RealSparse(builder->at(t));
  });
}

HamiltonianHandle HamiltonianHandle::effective(const ChainSpec& chain,
                                               const DressingProfile& dressing,
                                               BasisPtr basis,
                                               const EffectiveOptions& options,
                                               double energy_shift) {
  if (basis->n_sites() != chain.n_sites)
    throw ValidationError("basis and chain differ in site count");
  if (!dressing.time_dependent()) {
    const EffectiveModel model = derive_effective(chain, dressing, 0.0, options);
    return constant(basis, effective_operator(model, *basis, energy_shift));
  }
  // Guards are checked once per re-derivation; only errors propagate.
  return time_dependent(basis, [chain, dressing, basis, options, energy_shift](double t) {
    const EffectiveModel model = derive_effective(chain, dressing, t, options);
    return effective_operator(model, *basis, energy_shift);
  });
}

std::shared_ptr<const RealSparse> HamiltonianHandle::at(double t) const {
  if (fixed_) return fixed_;
  if (!generator_) throw ValidationError("empty Hamiltonian handle");
  auto m = std::make_shared<const RealSparse>(generator_(t));
  if (m->rows() != static_cast<Eigen::Index>(basis_->dim()))
    throw ValidationError("generated Hamiltonian does not match its basis");
  return m;
}

namespace {

/// One Krylov projection of exp(-i s (H - i/2 D)) v, valid for s up to the
/// accepted step. Lanczos when D is absent or uniform, Arnoldi otherwise.
class KrylovStep {
 public:
  KrylovStep(const RealSparse& h, const VectorXd* decay, int max_dim, double tol)
      : h_(h), max_dim_(max_dim), tol_(tol) {
    if (decay != nullptr && decay->size() > 0) {
      const double lo = decay->minCoeff();
      const double hi = decay->maxCoeff();
      if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) {
        uniform_decay_ = lo;
      } else {
        decay_ = decay;
      }
    }
  }

  /// Builds the subspace from v and returns an accepted step <= tau.
  double build(const VectorXcd& v, double tau) {
    beta_ = v.norm();
    const Eigen::Index n = v.size();
    const int m_cap = static_cast<int>(std::min<Eigen::Index>(max_dim_, n));
    if (basis_.rows() != n || basis_.cols() != m_cap + 1) basis_.resize(n, m_cap + 1);
    if (beta_ == 0.0) {
      dim_ = 0;
      return tau;
    }
    basis_.col(0) = v / beta_;
    hess_ = MatrixXcd::Zero(m_cap + 1, m_cap);
    residual_ = 0.0;
    dim_ = m_cap;
    VectorXcd w(n);
    double scale = 0.0;
    for (int j = 0; j < m_cap; ++j) {
      apply(basis_.col(j), w);
      if (decay_ == nullptr) {
        // Three-term recurrence, then two passes of full re-orthogonalization;
        // without them ghost Ritz values appear on wide spectra.
        if (j > 0) w -= hess_(j - 1, j) * basis_.col(j - 1);
        const double alpha = basis_.col(j).dot(w).real();
        w -= alpha * basis_.col(j);
        double fix = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
          const VectorXcd c = basis_.leftCols(j + 1).adjoint() * w;
          w -= basis_.leftCols(j + 1) * c;
          fix += c[j].real();
        }
        hess_(j, j) = alpha + fix;
      } else {
        for (int i = 0; i <= j; ++i) {
          const cplx c = basis_.col(i).dot(w);
          hess_(i, j) = c;
          w -= c * basis_.col(i);
        }
      }
      const double b = w.norm();
      scale = std::max(scale, std::abs(hess_(j, j)));
      if (b <= 1e-13 * std::max(1.0, scale)) {
        dim_ = j + 1;
        residual_ = 0.0;
        break;
      }
      hess_(j + 1, j) = b;
      if (decay_ == nullptr && j + 1 < m_cap) hess_(j, j + 1) = b;
      if (j + 1 < m_cap) basis_.col(j + 1) = w / b;
      residual_ = b;
    }
    // A subspace spanning the whole space is exact.
    if (dim_ == n) residual_ = 0.0;
    if (decay_ == nullptr) {
      Eigen::MatrixXd t = hess_.topLeftCorner(dim_, dim_).real();
      t = 0.5 * (t + t.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      evals_ = es.eigenvalues();
      evecs_ = es.eigenvectors();
    } else {
      // Diagonalize the small Hessenberg matrix once so that every trial
      // step costs O(m^2); fall back to expm when the eigenbasis is poor.
      Eigen::ComplexEigenSolver<MatrixXcd> es(hess_.topLeftCorner(dim_, dim_));
      cevals_ = es.eigenvalues();
      cevecs_ = es.eigenvectors();
      ccoef_ = cevecs_.partialPivLu().solve(VectorXcd::Unit(dim_, 0));
      const double growth = (cevecs_.cwiseAbs() * ccoef_.cwiseAbs()).maxCoeff();
      use_expm_ = !(growth < 1e6) || !ccoef_.allFinite();
    }
    if (residual_ == 0.0) return tau;

    double s = tau;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const VectorXcd y = small(s);
      const double err = beta_ * residual_ * std::abs(y[dim_ - 1]);
      if (err <= tol_ * beta_ * s) return s;
      const double shrink = 0.9 * std::pow(tol_ * s / (err / beta_), 1.0 / dim_);
      s *= std::clamp(shrink, 0.1, 0.9);
    }
    throw StiffnessError("Krylov step size underflow");
  }

  VectorXcd evaluate(double s) const {
    if (dim_ == 0) return VectorXcd::Zero(basis_.rows());
    return beta_ * (basis_.leftCols(dim_) * small(s));
  }

  double norm_at(double s) const {
    if (dim_ == 0) return 0.0;
    return beta_ * small(s).norm();
  }

 private:
  void apply(const Eigen::Ref<const VectorXcd>& x, VectorXcd& out) const {
    out.noalias() = h_ * x;
    if (decay_ != nullptr) out -= cplx(0.0, 0.5) * decay_->cwiseProduct(x);
  }

  VectorXcd small(double s) const {
    VectorXcd y;
    if (decay_ == nullptr) {
      VectorXcd phase(dim_);
      for (int k = 0; k < dim_; ++k)
        phase[k] = std::exp(cplx(0.0, -s * evals_[k])) * evecs_(0, k);
      y = evecs_ * phase;
      if (uniform_decay_ != 0.0) y *= std::exp(-0.5 * uniform_decay_ * s);
    } else if (!use_expm_) {
      VectorXcd phase(dim_);
      for (int k = 0; k < dim_; ++k) phase[k] = std::exp(cplx(0.0, -s) * cevals_[k]) * ccoef_[k];
      y = cevecs_ * phase;
    } else {
      const MatrixXcd a = cplx(0.0, -s) * hess_.topLeftCorner(dim_, dim_);
      y = a.exp().col(0);
    }
    return y;
  }

  const RealSparse& h_;
  const VectorXd* decay_ = nullptr;
  double uniform_decay_ = 0.0;
  int max_dim_;
  double tol_;
  MatrixXcd basis_;
  MatrixXcd hess_;
  VectorXd evals_;
  Eigen::MatrixXd evecs_;
  VectorXcd cevals_;
  MatrixXcd cevecs_;
  VectorXcd ccoef_;
  bool use_expm_ = false;
  double beta_ = 0.0;
  double residual_ = 0.0;
  int dim_ = 0;
};

/// exp(-i tau H) v by a Chebyshev expansion over Gershgorin bounds of H.
/// Long intervals are split into chunks of equal length so that the
/// expansion coefficients are shared.
class ChebyshevPropagator {
 public:
  ChebyshevPropagator(const RealSparse& h, double tol) : h_(h), tol_(tol) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
      double diag = 0.0;
      double off = 0.0;
      for (RealSparse::InnerIterator it(h, r); it; ++it)
        if (it.col() == r) {
          diag += it.value();
        } else {
          off += std::abs(it.value());
        }
      lo = std::min(lo, diag - off);
      hi = std::max(hi, diag + off);
    }
    center_ = 0.5 * (hi + lo);
    radius_ = std::max(0.5 * (hi - lo) * 1.01, 1e-12);
  }

  void advance(VectorXcd& v, double tau) {
    if (tau <= 0.0) return;
    const int chunks = static_cast<int>(std::ceil(radius_ * tau / kMaxArgument));
    const double step = tau / chunks;
    const VectorXcd& c = coefficients(step);
    for (int k = 0; k < chunks; ++k) apply(c, step, v);
  }

 private:
  static constexpr double kMaxArgument = 400.0;

  const VectorXcd& coefficients(double step) {
    if (step == cached_step_) return coef_;
    const double z = radius_ * step;
    std::vector<cplx> c;
    const cplx minus_i(0.0, -1.0);
    cplx phase(1.0, 0.0);
    for (int k = 0;; ++k) {
      const double j = std::cyl_bessel_j(static_cast<double>(k), z);
      c.push_back((k == 0 ? 1.0 : 2.0) * phase * j);
      phase *= minus_i;
      if (k > z && std::abs(j) < 0.1 * tol_) break;
    }
    coef_ = Eigen::Map<const VectorXcd>(c.data(), static_cast<Eigen::Index>(c.size()));
    cached_step_ = step;
    return coef_;
  }

  // Three-term recurrence on T_k((H - c)/r) v.
  void apply(const VectorXcd& c, double step, VectorXcd& v) {
    const double inv = 1.0 / radius_;
    t0_ = v;
    t1_.noalias() = h_ * v;
    t1_ = (t1_ - center_ * v) * inv;
    VectorXcd sum = c[0] * t0_ + c[1] * t1_;
    for (Eigen::Index k = 2; k < c.size(); ++k) {
      t2_.noalias() = h_ * t1_;
      t2_ = 2.0 * inv * (t2_ - center_ * t1_) - t0_;
      sum += c[k] * t2_;
      std::swap(t0_, t1_);
      std::swap(t1_, t2_);
    }
    v = std::exp(cplx(0.0, -center_ * step)) * sum;
  }

  const RealSparse& h_;
  double tol_;
  double center_ = 0.0;
  double radius_ = 1.0;
  double cached_step_ = -1.0;
  VectorXcd coef_;
  VectorXcd t0_, t1_, t2_;
};

void krylov_advance(const RealSparse& h, const VectorXd* decay, VectorXcd& v,
                    double tau, int krylov_dim, double tol) {
  KrylovStep step(h, decay, krylov_dim, tol);
  double done = 0.0;
  while (done < tau) {
    const double s = step.build(v, tau - done);
    v = step.evaluate(s);
    done = (tau - done - s <= 1e-15 * tau) ? tau : done + s;
  }
}

void check_basis(const HamiltonianHandle& h, const BasisPtr& basis) {
  if (h.basis()->n_sites() != basis->n_sites() || !(h.basis()->sector() == basis->sector()))
    throw ValidationError("Hamiltonian and state live on different bases");
}

/// Splits [t0, t1] into frozen-coefficient segments and reports their
/// midpoints; a constant Hamiltonian needs a single segment.
template <typename Fn>
void for_each_segment(const HamiltonianHandle& h, double dt_max, double t0,
                      double t1, Fn&& fn) {
  if (t1 <= t0) return;
  if (h.is_constant()) {
    fn(t0, t1, h.at(t0));
    return;
  }
  const auto steps = static_cast<long>(std::ceil((t1 - t0) / dt_max - 1e-12));
  const long count = std::max<long>(steps, 1);
  for (long k = 0; k < count; ++k) {
    const double a = t0 + (t1 - t0) * k / count;
    const double b = (k + 1 == count) ? t1 : t0 + (t1 - t0) * (k + 1) / count;
    fn(a, b, h.at(0.5 * (a + b)));
  }
}

struct DenseEigen {
  Eigen::MatrixXd vectors;
  VectorXd values;
};

DenseEigen dense_eigen(const RealSparse& h) {
  const Eigen::MatrixXd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  return {es.eigenvectors(), es.eigenvalues()};
}

void dense_propagate(const DenseEigen& e, VectorXcd& v, double tau) {
  VectorXcd c = e.vectors.transpose() * v;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cplx(0.0, -tau * e.values[k]));
  v = e.vectors * c;
}

}  // namespace

VectorXcd krylov_expv(const RealSparse& h, const VectorXd* decay, const VectorXcd& v,
                      double tau, int krylov_dim, double tol) {
  VectorXcd out = v;
  krylov_advance(h, decay, out, tau, krylov_dim, tol);
  return out;
}

void evolve_unitary(const HamiltonianHandle& h, const QuantumState& psi0,
                    const EvolutionConfig& cfg, const StateObserver& observer) {
  cfg.validate();
  check_basis(h, psi0.basis);
  if (cfg.method == Method::DenseExpm && h.basis()->dim() > cfg.dense_cap)
    throw DimensionCapError("dense-expm limited to dimension " +
                            std::to_string(cfg.dense_cap));
  VectorXcd v = psi0.amplitudes;
  double t = 0.0;
  std::optional<DenseEigen> cached;
  detail::OdeTolerance tol{cfg.rel_tol, cfg.abs_tol};
  tol.per_unit_time = true;
  double h_hint = 0.0;

  for (const double ts : cfg.sample_times()) {
    for_each_segment(h, cfg.dt_max, t, ts,
                     [&](double a, double b, const std::shared_ptr<const RealSparse>& m) {
                       switch (cfg.method) {
                         case Method::Krylov:
                           // A subspace of full dimension is exact in one Lanczos step;
                           // larger problems use the Chebyshev polynomial of H.
                           if (v.size() <= cfg.krylov_dim) {
                             krylov_advance(*m, nullptr, v, b - a, cfg.krylov_dim, cfg.rel_tol);
                           } else {
                             ChebyshevPropagator(*m, cfg.rel_tol).advance(v, b - a);
                           }
                           break;
                         case Method::DenseExpm:
                           if (!h.is_constant() || !cached) cached = dense_eigen(*m);
                           dense_propagate(*cached, v, b - a);
                           break;
                         case Method::AdaptiveRk: {
                           auto rhs = [&m](double, const VectorXcd& y) -> VectorXcd {
                             return cplx(0.0, -1.0) * (*m * y);
                           };
                           detail::dopri45(rhs, a, b, v, tol, h_hint);
                           break;
                         }
                       }
                     });
    t = ts;
    observer(ts, QuantumState{psi0.basis, v});
  }
}

StateSeries evolve_unitary(const HamiltonianHandle& h, const QuantumState& psi0,
                           const EvolutionConfig& cfg) {
  StateSeries out;
  evolve_unitary(h, psi0, cfg, [&](double t, const QuantumState& psi) {
    out.times.push_back(t);
    out.states.push_back(psi);
  });
  return out;
}

namespace {

/// Dissipator of the dephasing and decay channels on a fixed basis.
class Dissipator {
 public:
  Dissipator(const SubspaceBasis& basis, const NoiseSpec& noise) : noise_(noise) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    const int n = basis.n_sites();
    damping_.resize(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      const Config ca = basis.state(a);
      for (Eigen::Index b = 0; b < d; ++b) {
        const Config cb = basis.state(b);
        damping_(a, b) = -0.5 * noise.dephasing_gamma * excitation_count(ca ^ cb) -
                         0.5 * noise.decay_kappa *
                             (excitation_count(ca) + excitation_count(cb));
      }
    }
    if (noise.decay_kappa > 0.0) {
      // raise_[i][a] is the index of a with site i excited, when it exists.
      for (int i = 0; i < n; ++i) {
        std::vector<long> up(d, -1);
        bool any = false;
        for (Eigen::Index a = 0; a < d; ++a) {
          const Config c = basis.state(a);
          if (is_excited(c, i)) continue;
          const std::size_t k = basis.index(c | (Config{1} << i));
          if (k != SubspaceBasis::npos) {
            up[a] = static_cast<long>(k);
            any = true;
          }
        }
        if (any) raise_.push_back(std::move(up));
      }
    }
  }

  void add(const MatrixXcd& rho, MatrixXcd& out) const {
    out.array() += damping_.array() * rho.array();
    add_recycling(rho, out);
  }

  /// Element-wise part of the dissipator: rate matrix acting as a Hadamard product.
  const Eigen::MatrixXd& damping() const { return damping_; }

  /// Population fed back by the decay jumps.
  void add_recycling(const MatrixXcd& rho, MatrixXcd& out) const {
    const Eigen::Index d = rho.rows();
    for (const auto& up : raise_) {
      for (Eigen::Index b = 0; b < d; ++b) {
        if (up[b] < 0) continue;
        for (Eigen::Index a = 0; a < d; ++a)
          if (up[a] >= 0) out(a, b) += noise_.decay_kappa * rho(up[a], up[b]);
      }
    }
  }

 private:
  NoiseSpec noise_;
  Eigen::MatrixXd damping_;
  std::vector<std::vector<long>> raise_;
};

MatrixXcd lindblad_rhs(const RealSparse& h, const Dissipator& dis, const MatrixXcd& rho) {
  const MatrixXcd hr = h * rho;
  const MatrixXcd rh = (h * rho.adjoint()).adjoint();
  MatrixXcd out = cplx(0.0, -1.0) * (hr - rh);
  dis.add(rho, out);
  return out;
}

MatrixXcd lindblad_superoperator(const RealSparse& h, const Dissipator& dis,
                                 Eigen::Index d) {
  MatrixXcd l(d * d, d * d);
  MatrixXcd unit = MatrixXcd::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    for (Eigen::Index row = 0; row < d; ++row) {
      unit(row, col) = 1.0;
      const MatrixXcd out = lindblad_rhs(h, dis, unit);
      l.col(col * d + row) = Eigen::Map<const VectorXcd>(out.data(), d * d);
      unit(row, col) = 0.0;
    }
  }
  return l;
}

/// Master equation in the frame of the diagonal energies and the element-wise
/// damping, both Hadamard generators G. The integrated variable is
/// sigma = exp(-G s) o rho, which leaves only hopping and recycling to the
/// adaptive stepper. The frame restarts every `span` to keep exp(-G s) bounded.
class InteractionFrame {
 public:
  InteractionFrame() = default;
  InteractionFrame(const RealSparse& h, const Dissipator& dis) {
    const VectorXd e = h.diagonal();
    const Eigen::Index d = e.size();
    generator_.resize(d, d);
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index a = 0; a < d; ++a)
        generator_(a, b) = cplx(dis.damping()(a, b), -(e[a] - e[b]));
    hopping_ = h;
    for (Eigen::Index k = 0; k < hopping_.outerSize(); ++k)
      for (RealSparse::InnerIterator it(hopping_, k); it; ++it)
        if (it.row() == it.col()) it.valueRef() = 0.0;
    hopping_.prune(0.0);
    const double rate = dis.damping().cwiseAbs().maxCoeff();
    span_ = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  }

  void advance(const Dissipator& dis, MatrixXcd& rho, double tau, const detail::OdeTolerance& tol,
               double& h_hint) const {
    const auto chunks = static_cast<long>(std::max(1.0, std::ceil(tau / span_ - 1e-12)));
    const double piece = tau / static_cast<double>(chunks);
    for (long c = 0; c < chunks; ++c) {
      auto rhs = [&](double s, const MatrixXcd& sigma) -> MatrixXcd {
        const MatrixXcd phase = (generator_ * s).array().exp().matrix();
        const MatrixXcd r = phase.cwiseProduct(sigma);
        MatrixXcd out = lindblad_rhs(hopping_, dis, r) - dis.damping().cast<cplx>().cwiseProduct(r);
        return out.cwiseQuotient(phase);
      };
      detail::dopri45(rhs, 0.0, piece, rho, tol, h_hint);
      rho = rho.cwiseProduct((generator_ * piece).array().exp().matrix());
    }
  }

 private:
  MatrixXcd generator_;
  RealSparse hopping_;
  double span_ = std::numeric_limits<double>::infinity();
};

/// exp(tau A) w for a general operator A applied matrix-free, by restarted
/// Arnoldi with the corrected local error estimate and step control of the
/// expv scheme. `anorm` bounds the 1-norm of A.
template <typename Apply>
void arnoldi_expv(Apply&& apply, VectorXcd& w, double tau, double anorm, int krylov_dim,
                  double tol) {
  double beta = w.norm();
  if (tau <= 0.0 || beta == 0.0) return;
  const Eigen::Index n = w.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
  constexpr double kGamma = 0.9;
  constexpr double kDelta = 1.2;
  constexpr int kMaxReject = 20;
  const double abs_tol = tol * beta;
  const double breakdown = 1e-13 * anorm;
  const double xm = 1.0 / m;
  const double fact = std::pow((m + 1) / std::exp(1.0), m + 1) *
                      std::sqrt(2.0 * std::numbers::pi * (m + 1));
  double t_new = std::pow(fact * tol / (4.0 * anorm), xm) / anorm;
  double t_now = 0.0;
  MatrixXcd v(n, m + 1);
  while (t_now < tau) {
    double t_step = std::min(tau - t_now, t_new);
    MatrixXcd hm = MatrixXcd::Zero(m + 2, m + 2);
    v.col(0) = w / beta;
    int mb = m;
    int k1 = 2;
    for (int j = 0; j < m; ++j) {
      VectorXcd p = apply(v.col(j));
      for (int i = 0; i <= j; ++i) {
        hm(i, j) = v.col(i).dot(p);
        p -= hm(i, j) * v.col(i);
      }
      const double s = p.norm();
      if (s <= breakdown) {
        k1 = 0;
        mb = j + 1;
        t_step = tau - t_now;
        break;
      }
      hm(j + 1, j) = s;
      v.col(j + 1) = p / s;
    }
    double avnorm = 0.0;
    if (k1 != 0) {
      hm(m + 1, m) = 1.0;
      avnorm = apply(v.col(m)).norm();
    }
    MatrixXcd f;
    double err = 0.0;
    for (int reject = 0;; ++reject) {
      const int mx = mb + k1;
      f = (t_step * hm.topLeftCorner(mx, mx)).exp();
      if (k1 == 0) break;
      const double phi1 = std::abs(beta * f(m, 0));
      const double phi2 = std::abs(beta * f(m + 1, 0) * avnorm);
      if (phi1 > 10.0 * phi2) {
        err = phi2;
      } else if (phi1 > phi2) {
        err = phi1 * phi2 / (phi1 - phi2);
      } else {
        err = phi1;
      }
      if (err <= kDelta * t_step * abs_tol / tau) break;
      if (reject == kMaxReject)
        throw StiffnessError("Arnoldi step rejected " + std::to_string(kMaxReject) + " times");
      t_step = kGamma * t_step * std::pow(t_step * abs_tol / (tau * err), xm);
    }
    const int mx = mb + std::max(0, k1 - 1);
    w = v.leftCols(mx) * (beta * f.col(0).head(mx));
    beta = w.norm();
    t_now += t_step;
    t_new = err > 0.0 ? kGamma * t_step * std::pow(t_step * abs_tol / (tau * err), xm)
                      : 2.0 * t_step;
  }
}

constexpr Eigen::Index kSuperoperatorCap = 32;
constexpr double kKrylovDensityBytes = 1.0 * (1 << 30);

}  // namespace

void evolve_lindblad(const HamiltonianHandle& h, const NoiseSpec& noise,
                     const DensityOperator& rho0, const EvolutionConfig& cfg,
                     const DensityObserver& observer) {
  cfg.validate();
  noise.validate();
  check_basis(h, rho0.basis);
  const auto d = static_cast<Eigen::Index>(rho0.basis->dim());
  if (static_cast<std::size_t>(d) > cfg.dense_cap)
    throw DimensionCapError("density-matrix dimension " + std::to_string(d) +
                            " exceeds the dense cap " + std::to_string(cfg.dense_cap) +
                            "; use the trajectory engine");
  if (cfg.method == Method::Krylov &&
      16.0 * (cfg.krylov_dim + 1) * static_cast<double>(d) * static_cast<double>(d) >
          kKrylovDensityBytes)
    throw DimensionCapError("krylov density evolution of dimension " + std::to_string(d) +
                            " needs more than 1 GiB of Krylov vectors; use the trajectory engine");
  if (cfg.method == Method::DenseExpm && d > kSuperoperatorCap)
    throw DimensionCapError("dense-expm superoperator limited to dimension " +
                            std::to_string(kSuperoperatorCap));

  const Dissipator dis(*rho0.basis, noise);
  MatrixXcd rho = rho0.matrix;
  double t = 0.0;
  detail::OdeTolerance tol{cfg.rel_tol, cfg.abs_tol};
  double h_hint = 0.0;
  std::shared_ptr<const RealSparse> last_h;
  InteractionFrame frame;
  MatrixXcd super;
  std::map<double, MatrixXcd> propagators;

  for (const double ts : cfg.sample_times()) {
    for_each_segment(h, cfg.dt_max, t, ts,
                     [&](double a, double b, const std::shared_ptr<const RealSparse>& m) {
                       if (cfg.method == Method::AdaptiveRk) {
                         if (m != last_h) {
                           frame = InteractionFrame(*m, dis);
                           last_h = m;
                         }
                         frame.advance(dis, rho, b - a, tol, h_hint);
                         return;
                       }
                       if (cfg.method == Method::Krylov) {
                         double hnorm = 0.0;
                         for (Eigen::Index r = 0; r < m->outerSize(); ++r) {
                           double row = 0.0;
                           for (RealSparse::InnerIterator it(*m, r); it; ++it)
                             row += std::abs(it.value());
                           hnorm = std::max(hnorm, row);
                         }
                         const double anorm =
                             2.0 * hnorm + dis.damping().cwiseAbs().maxCoeff() +
                             noise.decay_kappa * rho0.basis->n_sites() + 1e-300;
                         auto apply = [&](const VectorXcd& x) -> VectorXcd {
                           const MatrixXcd out =
                               lindblad_rhs(*m, dis, Eigen::Map<const MatrixXcd>(x.data(), d, d));
                           return Eigen::Map<const VectorXcd>(out.data(), d * d);
                         };
                         VectorXcd vec = Eigen::Map<const VectorXcd>(rho.data(), d * d);
                         arnoldi_expv(apply, vec, b - a, anorm, cfg.krylov_dim, cfg.rel_tol);
                         rho = Eigen::Map<const MatrixXcd>(vec.data(), d, d);
                         return;
                       }
                       if (m != last_h) {
                         super = lindblad_superoperator(*m, dis, d);
                         propagators.clear();
                         last_h = m;
                       }
                       const double tau = b - a;
                       auto it = propagators.find(tau);
                       if (it == propagators.end())
                         it = propagators.emplace(tau, (super * tau).exp()).first;
                       VectorXcd vec = it->second * Eigen::Map<const VectorXcd>(rho.data(), d * d);
                       rho = Eigen::Map<const MatrixXcd>(vec.data(), d, d);
                     });
    t = ts;
    observer(ts, DensityOperator{rho0.basis, rho});
  }
}

DensitySeries evolve_lindblad(const HamiltonianHandle& h, const NoiseSpec& noise,
                              const DensityOperator& rho0, const EvolutionConfig& cfg) {
  DensitySeries out;
  evolve_lindblad(h, noise, rho0, cfg, [&](double t, const DensityOperator& rho) {
    out.times.push_back(t);
    out.states.push_back(rho);
  });
  return out;
}

std::uint64_t trajectory_seed(std::uint64_t base, std::uint64_t k) {
  // splitmix64 finalizer over (base, k) so nearby seeds decorrelate.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct TrajectoryRecord {
  std::vector<VectorXd> values;  // p_k f_k when post-selecting, else f_k
  std::vector<double> weight;    // p_k
  long jumps = 0;
};

class JumpModel {
 public:
  JumpModel(const SubspaceBasis& basis, const NoiseSpec& noise, Unraveling unraveling)
      : basis_(basis), noise_(noise), flip_(unraveling == Unraveling::SignFlip) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    const int n = basis.n_sites();
    const double g = noise.dephasing_gamma;
    const double k = noise.decay_kappa;
    decay_.resize(d);
    for (Eigen::Index a = 0; a < d; ++a) {
      const int pop = excitation_count(basis.state(a));
      decay_[a] = flip_ ? 0.25 * g * n + k * pop : (g + k) * pop;
    }
    sink_ = k > 0.0 && basis.sector().kind != Sector::Kind::Full;
  }

  const VectorXd* decay() const { return &decay_; }
  bool has_sink() const { return sink_; }
  /// No-jump decay rate when it is the same for every basis state.
  std::optional<double> uniform_rate() const {
    if (decay_.size() == 0) return 0.0;
    const double lo = decay_.minCoeff();
    const double hi = decay_.maxCoeff();
    if (hi - lo <= 1e-14 * std::max(1.0, hi)) return lo;
    return std::nullopt;
  }

  /// Applies a randomly chosen jump; returns false when the jump leaves the basis.
  bool jump(VectorXcd& psi, std::mt19937_64& rng) const {
    const int n = basis_.n_sites();
    VectorXd occupation = VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < psi.size(); ++a) {
      const double w = std::norm(psi[a]);
      if (w == 0.0) continue;
      const Config c = basis_.state(a);
      for (int i = 0; i < n; ++i)
        if (is_excited(c, i)) occupation[i] += w;
    }
    const double norm2 = psi.squaredNorm();
    const double g = noise_.dephasing_gamma;
    const double k = noise_.decay_kappa;
    // Channel rates: dephasing on site i, then decay on site i.
    VectorXd rate(2 * n);
    for (int i = 0; i < n; ++i) {
      rate[i] = flip_ ? 0.25 * g * norm2 : g * occupation[i];
      rate[n + i] = k * occupation[i];
    }
    std::discrete_distribution<int> pick(rate.data(), rate.data() + rate.size());
    const int channel = pick(rng);
    const int site = channel % n;
    if (channel < n) {
      for (Eigen::Index a = 0; a < psi.size(); ++a) {
        if (is_excited(basis_.state(a), site)) continue;
        psi[a] = flip_ ? -psi[a] : cplx(0.0);
      }
    } else {
      if (sink_) return false;
      VectorXcd out = VectorXcd::Zero(psi.size());
      for (Eigen::Index a = 0; a < psi.size(); ++a) {
        const Config c = basis_.state(a);
        if (!is_excited(c, site)) continue;
        out[basis_.index(c ^ (Config{1} << site))] = psi[a];
      }
      psi = std::move(out);
    }
    psi.normalize();
    return true;
  }

 private:
  const SubspaceBasis& basis_;
  NoiseSpec noise_;
  bool flip_;
  VectorXd decay_;
  bool sink_ = false;
};

}  // namespace

TrajectoryResult evolve_trajectories(const HamiltonianHandle& h, const NoiseSpec& noise,
                                     const QuantumState& psi0, const EvolutionConfig& cfg,
                                     const TrajectoryRequest& request) {
  cfg.validate(true);
  noise.validate();
  check_basis(h, psi0.basis);
  if (!request.observable) throw ValidationError("trajectory observable is empty");
  const auto& basis = *psi0.basis;
  const JumpModel jumps(basis, noise, request.unraveling);
  if (jumps.has_sink() && !request.post_select)
    throw ValidationError("decay out of a sector basis requires post-selection");

  BasisPtr sector_basis;
  std::vector<std::size_t> sector_map;
  if (request.post_select) {
    const int n = *request.post_select;
    if (n < 0 || n > basis.n_sites())
      throw EmptySectorError("sector n=" + std::to_string(n) + " does not exist");
    sector_basis = SubspaceBasis::get(basis.n_sites(), Sector::excitation_number(n));
    sector_map.resize(sector_basis->dim());
    for (std::size_t k = 0; k < sector_basis->dim(); ++k)
      sector_map[k] = basis.index(sector_basis->state(k));
  }

  const std::vector<double> times = cfg.sample_times();
  const auto count = static_cast<std::size_t>(cfg.trajectory_count);
  std::vector<TrajectoryRecord> records(count);
  const bool closed = noise.is_closed();

  auto observe = [&](double t, const VectorXcd& psi, bool lost, TrajectoryRecord& rec) {
    if (!request.post_select) {
      const VectorXcd unit = psi / psi.norm();
      rec.values.push_back(request.observable(t, QuantumState{psi0.basis, unit}));
      rec.weight.push_back(1.0);
      return;
    }
    VectorXcd proj = VectorXcd::Zero(sector_basis->dim());
    double p = 0.0;
    if (!lost) {
      const double norm2 = psi.squaredNorm();
      for (std::size_t k = 0; k < sector_map.size(); ++k)
        if (sector_map[k] != SubspaceBasis::npos) proj[k] = psi[sector_map[k]];
      p = proj.squaredNorm() / norm2;
    }
    if (p > 0.0) {
      proj /= proj.norm();
      rec.values.push_back(p * request.observable(t, QuantumState{sector_basis, proj}));
    } else {
      rec.values.emplace_back();  // sized after the first successful evaluation
    }
    rec.weight.push_back(p);
  };

  // With a state-independent no-jump rate the norm is e^{-rate t} and jump
  // times follow from the threshold alone; the Hermitian part is propagated
  // with a Chebyshev expansion.
  const std::optional<double> uniform_rate = closed ? std::optional<double>(0.0)
                                                    : jumps.uniform_rate();
  auto advance_uniform = [&](const RealSparse& m, double a, double b, VectorXcd& psi,
                             double& threshold, TrajectoryRecord& rec, std::mt19937_64& rng,
                             bool& lost) {
    ChebyshevPropagator prop(m, cfg.rel_tol);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double rate = *uniform_rate;
    while (a < b) {
      const double norm2 = psi.squaredNorm();
      const double to_jump =
          rate > 0.0 ? std::log(norm2 / threshold) / rate : std::numeric_limits<double>::infinity();
      if (to_jump >= b - a) {
        prop.advance(psi, b - a);
        psi *= std::exp(-0.5 * rate * (b - a));
        return;
      }
      prop.advance(psi, to_jump);
      a += to_jump;
      ++rec.jumps;
      if (!jumps.jump(psi, rng)) {
        lost = true;
        return;
      }
      threshold = uniform(rng);
    }
  };
  auto advance_krylov = [&](const RealSparse& m, double a, double b, VectorXcd& psi,
                            double& threshold, TrajectoryRecord& rec, std::mt19937_64& rng,
                            bool& lost) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    KrylovStep step(m, jumps.decay(), cfg.krylov_dim, cfg.rel_tol);
    while (a < b) {
      const double s = step.build(psi, b - a);
      const double n_end = step.norm_at(s);
      if (n_end * n_end > threshold) {
        psi = step.evaluate(s);
        a = (b - a - s <= 1e-15 * b) ? b : a + s;
        continue;
      }
      double lo = 0.0;
      double hi = s;
      while (hi - lo > 1e-12 * std::max(1.0, b)) {
        const double mid = 0.5 * (lo + hi);
        const double nm = step.norm_at(mid);
        (nm * nm > threshold ? lo : hi) = mid;
      }
      psi = step.evaluate(hi);
      a += hi;
      ++rec.jumps;
      if (!jumps.jump(psi, rng)) {
        lost = true;
        return;
      }
      threshold = uniform(rng);
    }
  };

  detail::parallel_for(count, cfg.threads, [&](std::size_t k) {
    TrajectoryRecord& rec = records[k];
    std::mt19937_64 rng(trajectory_seed(cfg.seed, k));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    VectorXcd psi = psi0.amplitudes / psi0.amplitudes.norm();
    double threshold = closed ? -1.0 : uniform(rng);
    bool lost = false;
    double t = 0.0;
    for (const double ts : times) {
      if (!lost) {
        for_each_segment(h, cfg.dt_max, t, ts,
                         [&](double a, double b, const std::shared_ptr<const RealSparse>& m) {
                           if (lost) return;
                           if (uniform_rate) {
                             advance_uniform(*m, a, b, psi, threshold, rec, rng, lost);
                           } else {
                             advance_krylov(*m, a, b, psi, threshold, rec, rng, lost);
                           }
                         });
      }
      t = ts;
      observe(ts, psi, lost, rec);
    }
  });

  TrajectoryResult out;
  out.times = times;
  out.trajectory_count = static_cast<int>(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.seeds.push_back(trajectory_seed(cfg.seed, k));
    out.jump_count += records[k].jumps;
  }
  const double kd = static_cast<double>(count);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    Eigen::Index width = 0;
    for (const auto& rec : records) width = std::max(width, rec.values[ti].size());
    VectorXd sum = VectorXd::Zero(width);
    double psum = 0.0;
    for (const auto& rec : records) {
      if (rec.values[ti].size() == width) sum += rec.values[ti];
      psum += rec.weight[ti];
    }
    const double pbar = psum / kd;
    double pvar = 0.0;
    for (const auto& rec : records) pvar += std::pow(rec.weight[ti] - pbar, 2);
    pvar = count > 1 ? pvar / (kd - 1.0) : 0.0;

    if (request.post_select && !(pbar > kDefaultPostSelectionFloor))
      throw EmptyPostSelectionError("no trajectory weight in the post-selected sector", pbar);
    const VectorXd mean = request.post_select ? VectorXd(sum / psum) : VectorXd(sum / kd);
    VectorXd var = VectorXd::Zero(width);
    for (const auto& rec : records) {
      VectorXd dev = rec.values[ti].size() == width ? rec.values[ti] : VectorXd::Zero(width);
      if (request.post_select) dev -= rec.weight[ti] * mean;
      else dev -= mean;
      var += dev.cwiseAbs2();
    }
    VectorXd se = VectorXd::Zero(width);
    if (count > 1) {
      se = (var / (kd - 1.0) / kd).cwiseSqrt();
      if (request.post_select) se /= pbar;
    }
    out.mean.push_back(mean);
    out.std_error.push_back(se);
    out.probability.push_back(pbar);
    out.probability_error.push_back(std::sqrt(pvar / kd));
  }
  return out;
}

HrsResult evolve_hrs(const VectorXd& hopping, double gamma, int n_sites, int origin,
                     const std::vector<double>& t_points, double kappa, double rel_tol,
                     double abs_tol) {
  if (gamma < 0.0 || kappa < 0.0) throw ValidationError("HRS rates must be non-negative");
  if (n_sites < 1) throw ValidationError("HRS chain needs at least one site");
  if (origin < 0 || origin >= n_sites) throw ValidationError("HRS origin outside the chain");
  for (std::size_t k = 0; k < t_points.size(); ++k)
    if (t_points[k] < 0.0 || (k > 0 && !(t_points[k] > t_points[k - 1])))
      throw ValidationError("HRS time points must be non-negative and increasing");

  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index d = 1; d <= hopping.size(); ++d) {
    if (hopping[d - 1] == 0.0) continue;
    for (int m = 0; m + d < n_sites; ++m) {
      trip.emplace_back(m, m + d, hopping[d - 1]);
      trip.emplace_back(m + d, m, hopping[d - 1]);
    }
  }
  RealSparse h(n_sites, n_sites);
  h.setFromTriplets(trip.begin(), trip.end());

  auto rhs = [&](double, const MatrixXcd& rho) -> MatrixXcd {
    const MatrixXcd hr = h * rho;
    const MatrixXcd rh = (h * rho.adjoint()).adjoint();
    MatrixXcd out = cplx(0.0, -1.0) * (hr - rh);
    if (gamma > 0.0) {
      out -= gamma * rho;
      out.diagonal() += gamma * rho.diagonal();
    }
    if (kappa > 0.0) out -= kappa * rho;
    return out;
  };

  MatrixXcd rho = MatrixXcd::Zero(n_sites, n_sites);
  rho(origin, origin) = 1.0;
  detail::OdeTolerance tol{rel_tol, abs_tol};
  double h_hint = 0.0;
  double t = 0.0;
  HrsResult out;
  for (const double ts : t_points) {
    detail::dopri45(rhs, t, ts, rho, tol, h_hint);
    t = ts;
    double msd = 0.0;
    for (int n = 0; n < n_sites; ++n)
      msd += static_cast<double>((n - origin) * (n - origin)) * rho(n, n).real();
    out.times.push_back(ts);
    out.states.push_back({origin, rho});
    out.msd.push_back(msd);
  }
  return out;
}

double hrs_msd_closed_form(const VectorXd& hopping, double gamma, double t) {
  double s = 0.0;
  for (Eigen::Index d = 1; d <= hopping.size(); ++d) s += std::pow(d * hopping[d - 1], 2);
  if (gamma == 0.0) return 2.0 * s * t * t;
  const double x = gamma * t;
  return 4.0 * s / (gamma * gamma) * (x + std::expm1(-x));
}

}  // namespace rydex
