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

#include "rydex/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "parallel.hpp"
#include "rydex/basis.hpp"
#include "rydex/dynamics.hpp"
#include "rydex/error.hpp"
#include "rydex/topology.hpp"

namespace rydex {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

// ------------------------------------------------------------------ report

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const ObservableSeries* ExperimentReport::find_series(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return &s;
  return nullptr;
}

const EnsembleSeries* ExperimentReport::find_ensemble(const std::string& name) const {
  for (const auto& e : ensembles)
    if (e.mean.name == name) return &e;
  return nullptr;
}

const CheckResult* ExperimentReport::find_check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void ExperimentReport::add_parameter(const std::string& name, double value,
                                     const std::string& unit) {
  parameters.push_back({name, value, unit});
}

const CheckResult& ExperimentReport::check_bound(const std::string& name, double value,
                                                 double threshold, bool at_least,
                                                 const std::string& detail) {
  CheckResult c;
  c.name = name;
  c.value = value;
  c.threshold = threshold;
  c.relation = at_least ? ">=" : "<=";
  c.passed = at_least ? value >= threshold : value <= threshold;
  c.detail = detail;
  checks.push_back(c);
  return checks.back();
}

const CheckResult& ExperimentReport::check_true(const std::string& name, bool ok,
                                                const std::string& detail) {
  CheckResult c;
  c.name = name;
  c.value = ok ? 1.0 : 0.0;
  c.threshold = 1.0;
  c.relation = "==";
  c.passed = ok;
  c.detail = detail;
  checks.push_back(c);
  return checks.back();
}

namespace {

std::vector<double> linspace(double t_final, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = (n == 1) ? t_final : t_final * k / (n - 1);
  out.back() = t_final;
  return out;
}

/// Inserts t into a sorted grid unless a point within 1e-9 already exists.
std::vector<double> with_time(std::vector<double> grid, double t) {
  for (const double g : grid)
    if (std::abs(g - t) <= 1e-9 * std::max(1.0, t)) return grid;
  grid.insert(std::upper_bound(grid.begin(), grid.end(), t), t);
  return grid;
}

std::size_t nearest_index(const std::vector<double>& grid, double t) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (std::abs(grid[k] - t) < std::abs(grid[best] - t)) best = k;
  return best;
}

Config bit(int i) { return Config{1} << i; }

MatrixXd column(const VectorXd& v) { return v; }

MatrixXd scalar(double x) { return MatrixXd::Constant(1, 1, x); }

ObservableSeries make_series(const std::string& name, const std::string& note,
                             std::vector<std::string> columns = {}) {
  ObservableSeries s;
  s.name = name;
  s.note = note;
  s.columns = std::move(columns);
  return s;
}

/// Mean and sample standard deviation over members, per time.
EnsembleSeries ensemble_stats(const std::string& name, const std::string& note,
                              const std::vector<std::string>& columns,
                              const std::vector<double>& times,
                              const std::vector<std::vector<VectorXd>>& members,
                              const std::vector<std::uint64_t>& seeds) {
  EnsembleSeries e;
  e.mean = make_series(name, note, columns);
  e.spread = make_series(name + "_std", note, columns);
  e.spread_kind = "std";
  e.realizations = static_cast<int>(members.size());
  e.seeds = seeds;
  const double k = static_cast<double>(members.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    VectorXd sum = VectorXd::Zero(members.front()[ti].size());
    for (const auto& m : members) sum += m[ti];
    const VectorXd mean = sum / k;
    VectorXd var = VectorXd::Zero(mean.size());
    for (const auto& m : members) var += (m[ti] - mean).cwiseAbs2();
    var = members.size() > 1 ? VectorXd(var / (k - 1.0)) : VectorXd(var * 0.0);
    e.mean.append(times[ti], column(mean));
    e.spread.append(times[ti], column(var.cwiseSqrt()));
  }
  return e;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

// ---------------------------------------------------------------- transfer

namespace {

struct DesignFunctor {
  using Scalar = double;
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ChainSpec* chain;
  const TransferDesignOptions* options;
  int n;  // transfer-chain nodes
  double base_rate;
  double mu;
  VectorXd target;  // J_{i,i+1}, i = 1..n-1

  int inputs() const { return 2 * n; }
  int values() const { return 2 * n; }

  DressingProfile dressing(const VectorXd& x) const {
    VectorXd rabi = VectorXd::Zero(n + 1);
    VectorXd det = VectorXd::Constant(n + 1, options->delta_guess);
    for (int i = 1; i <= n; ++i) {
      rabi[i] = x[i - 1] * options->omega_guess;
      det[i] = x[n + i - 1] * options->delta_guess;
    }
    return DressingProfile::from_values(rabi, det);
  }

  int operator()(const VectorXd& x, VectorXd& f) const {
    f.resize(values());
    try {
      EffectiveOptions quiet = options->effective;
      quiet.validity_policy = GuardPolicy::Ignore;
      const EffectiveModel m = derive_effective(*chain, dressing(x), 0.0, quiet);
      int r = 0;
      for (int i = 1; i < n; ++i) f[r++] = (m.exchange(i, i + 1) - target[i - 1]) / base_rate;
      for (int i = 1; i <= n; ++i) f[r++] = (m.mu[i] - mu) / base_rate;
      f[r++] = x[0] - x[n - 1];
    } catch (const Error&) {
      f.setConstant(1e6);
    }
    return 0;
  }
};

}  // namespace

double default_transfer_rate(const ChainSpec& chain, double omega, double delta) {
  const int n = chain.n_sites - 1;
  if (n < 2) throw ValidationError("transfer chain needs at least two driven nodes");
  const double v = vdw_interaction(chain, 1, 2);
  const double j_nn = omega * omega * v / (4.0 * delta * (delta + v));
  double widest = 0.0;
  for (int i = 1; i < n; ++i) widest = std::max(widest, std::sqrt(double(i) * (n - i)));
  return j_nn / widest;
}

double default_transfer_mu(const ChainSpec& chain, double omega, double delta,
                           const EffectiveOptions& options) {
  const int n = chain.n_sites - 1;
  if (n < 2) throw ValidationError("transfer chain needs at least two driven nodes");
  VectorXd rabi = VectorXd::Constant(n + 1, omega);
  rabi[0] = 0.0;
  const VectorXd det = VectorXd::Constant(n + 1, delta);
  const EffectiveModel m =
      derive_effective(chain, DressingProfile::from_values(rabi, det), 0.0, options);
  return m.mu.tail(n).mean();
}

TransferDesign design_transfer_couplings(const ChainSpec& chain, double base_rate, double mu,
                                         const TransferDesignOptions& options) {
  chain.validate();
  const int n = chain.n_sites - 1;
  if (n < 2) throw ValidationError("transfer chain needs at least two driven nodes");
  if (!(base_rate > 0.0)) throw ValidationError("base rate J must be positive");
  if (options.omega_guess <= 0.0 || options.delta_guess == 0.0)
    throw ValidationError("design needs a positive Omega and a non-zero Delta guess");

  DesignFunctor fn;
  fn.chain = &chain;
  fn.options = &options;
  fn.n = n;
  fn.base_rate = base_rate;
  fn.mu = mu;
  fn.target.resize(n - 1);
  double widest = 0.0;
  for (int i = 1; i < n; ++i) {
    fn.target[i - 1] = base_rate * std::sqrt(double(i) * (n - i));
    widest = std::max(widest, fn.target[i - 1]);
  }

  // Start from Omega_i proportional to the square root of the adjacent bonds.
  VectorXd x(2 * n);
  for (int i = 1; i <= n; ++i) {
    const double left = i > 1 ? fn.target[i - 2] : fn.target[0];
    const double right = i < n ? fn.target[i - 1] : fn.target[n - 2];
    x[i - 1] = std::sqrt(std::sqrt(left * right) / widest);
    x[n + i - 1] = 1.0;
  }
  Eigen::NumericalDiff<DesignFunctor> numeric(fn, 1e-10);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<DesignFunctor>> lm(numeric);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = 20000;
  lm.minimize(x);

  TransferDesign out;
  out.base_rate = base_rate;
  out.mu = mu;
  out.transfer_time = std::numbers::pi / (2.0 * base_rate);
  DressingProfile dressing = fn.dressing(x);
  EffectiveOptions quiet = options.effective;
  quiet.validity_policy = GuardPolicy::Ignore;
  EffectiveModel m = derive_effective(chain, dressing, 0.0, quiet);

  // Phase lock: atom 0 sits at mu, so both branches share exp(-i mu t).
  VectorXd det = dressing.detuning_at(0.0);
  det[0] = mu - m.ising.row(0).sum() + kTwoPi * options.phase_winding / out.transfer_time;
  if (det[0] == 0.0) throw DesignFailureError("phase lock needs a zero detuning", 0.0);
  dressing = DressingProfile::from_values(dressing.rabi_at(0.0), det);
  out.model = derive_effective(chain, dressing, 0.0, options.effective);
  out.dressing = dressing;

  for (int i = 1; i < n; ++i)
    out.exchange_residual =
        std::max(out.exchange_residual,
                 std::abs(out.model.exchange(i, i + 1) - fn.target[i - 1]) / base_rate);
  for (int i = 0; i <= n; ++i)
    out.onsite_residual =
        std::max(out.onsite_residual, std::abs(out.model.mu[i] - mu) / base_rate);
  if (!(out.exchange_residual <= options.exchange_tolerance) ||
      !(out.onsite_residual <= options.onsite_tolerance)) {
    std::ostringstream msg;
    msg << "coupling design did not converge: exchange residual " << out.exchange_residual
        << ", on-site residual " << out.onsite_residual;
    throw DesignFailureError(msg.str(), std::max(out.exchange_residual, out.onsite_residual));
  }
  return out;
}

namespace {

struct TransferRecord {
  std::vector<VectorXd> values;  // (fidelity, C01, C0n) per time
};

TransferRecord transfer_effective(const ChainSpec& chain, const TransferDesign& design,
                                  const EffectiveOptions& options,
                                  const std::vector<double>& times) {
  const int n_atoms = chain.n_sites;
  auto basis = SubspaceBasis::get(n_atoms, Sector::excitation_number(1));
  EffectiveOptions quiet = options;
  quiet.validity_policy = GuardPolicy::Ignore;
  const EffectiveModel m = derive_effective(chain, design.dressing, 0.0, quiet);
  const auto h = HamiltonianHandle::constant(basis, effective_operator(m, *basis, design.mu));
  const double r = 1.0 / std::sqrt(2.0);
  const auto psi0 = QuantumState::superposition(basis, {{bit(0), r}, {bit(1), r}});
  const auto target =
      QuantumState::superposition(basis, {{bit(0), r}, {bit(n_atoms - 1), cplx(0.0, -r)}});
  EvolutionConfig cfg;
  cfg.t_final = times.back();
  cfg.output_times = times;
  cfg.method = Method::DenseExpm;
  TransferRecord rec;
  evolve_unitary(h, psi0, cfg, [&](double, const QuantumState& psi) {
    VectorXd v(3);
    v << transfer_fidelity(psi, target), concurrence(reduced_two_site(psi, 0, 1)),
        concurrence(reduced_two_site(psi, 0, n_atoms - 1));
    rec.values.push_back(v);
  });
  return rec;
}

/// Exact model, post-selected coherently onto the single-exciton sector.
TransferRecord transfer_exact(const ChainSpec& chain, const TransferDesign& design,
                              const std::vector<double>& times, std::vector<double>* prob) {
  const int n_atoms = chain.n_sites;
  const auto h = HamiltonianHandle::exact(chain, design.dressing);
  auto one = SubspaceBasis::get(n_atoms, Sector::excitation_number(1));
  const double r = 1.0 / std::sqrt(2.0);
  const auto psi0 = QuantumState::superposition(h.basis(), {{bit(0), r}, {bit(1), r}});
  const auto target =
      QuantumState::superposition(one, {{bit(0), r}, {bit(n_atoms - 1), cplx(0.0, -r)}});
  EvolutionConfig cfg;
  cfg.t_final = times.back();
  cfg.output_times = times;
  cfg.method = Method::DenseExpm;
  TransferRecord rec;
  evolve_unitary(h, psi0, cfg, [&](double, const QuantumState& psi) {
    const Projection p = project_to_sector(psi, 1, ProjectionMode::Coherent);
    VectorXd v(3);
    v << transfer_fidelity(p.rho, target), concurrence(reduced_two_site(p.rho, 0, 1)),
        concurrence(reduced_two_site(p.rho, 0, n_atoms - 1));
    rec.values.push_back(v);
    if (prob != nullptr) prob->push_back(p.probability);
  });
  return rec;
}

double peak(const TransferRecord& rec, int entry) {
  double best = 0.0;
  for (const auto& v : rec.values) best = std::max(best, v[entry]);
  return best;
}

}  // namespace

ExperimentReport run_entanglement_transfer(const TransferConfig& cfg) {
  if (cfg.n_atoms < 3) throw ValidationError("transfer needs at least three atoms");
  if (cfg.ensemble < 1 || cfg.exact_ensemble < 1 || cfg.sweep_ensemble < 1)
    throw ValidationError("ensemble sizes must be positive");
  if (!(cfg.duration > 0.0) || cfg.n_outputs < 2)
    throw ValidationError("transfer duration and output count must be positive");

  ExperimentReport rep;
  rep.id = "transfer";
  const ChainSpec chain = ChainSpec::from_nn_shift(cfg.n_atoms, cfg.spacing,
                                                   cfg.v_ratio * cfg.delta);
  TransferDesignOptions dopt;
  dopt.omega_guess = cfg.omega;
  dopt.delta_guess = cfg.delta;
  const double j = cfg.base_rate.value_or(default_transfer_rate(chain, cfg.omega, cfg.delta));
  const double mu =
      cfg.mu.value_or(default_transfer_mu(chain, cfg.omega, cfg.delta, dopt.effective));
  const TransferDesign design = design_transfer_couplings(chain, j, mu, dopt);
  const double t_star = design.transfer_time;

  rep.add_parameter("n_atoms", cfg.n_atoms);
  rep.add_parameter("spacing", cfg.spacing, "um");
  rep.add_parameter("omega_reference", cfg.omega, "rad/us");
  rep.add_parameter("delta_reference", cfg.delta, "rad/us");
  rep.add_parameter("v_nn", cfg.v_ratio * cfg.delta, "rad/us");
  rep.add_parameter("base_rate", j, "rad/us");
  rep.add_parameter("mu", mu, "rad/us");
  rep.add_parameter("transfer_time", t_star, "us");
  rep.add_parameter("sigma", cfg.sigma, "um");
  rep.add_parameter("seed", static_cast<double>(cfg.seed));
  const VectorXd rabi = design.dressing.rabi_at(0.0);
  const VectorXd det = design.dressing.detuning_at(0.0);
  for (int i = 0; i < cfg.n_atoms; ++i) {
    rep.add_parameter("omega_" + std::to_string(i), rabi[i], "rad/us");
    rep.add_parameter("delta_" + std::to_string(i), det[i], "rad/us");
  }
  rep.notes.push_back("records: fidelity to (|r_0> - i|r_N>)/sqrt(2), C(rho_01), C(rho_0N)");
  rep.notes.push_back("effective engine: nearest-neighbour exchange, all-range Ising shifts");
  rep.notes.push_back("exact engine: coherent post-selection onto one exciton");

  rep.check_bound("design_exchange_residual", design.exchange_residual, 1e-6, false,
                  "max |J_{i,i+1} - J sqrt(i(N-i))| / J");
  rep.check_bound("design_onsite_residual", design.onsite_residual, 1e-4, false,
                  "max |mu_i - mu| / J");

  const std::vector<double> times =
      with_time(linspace(cfg.duration * t_star, cfg.n_outputs), t_star);
  const std::size_t i_star = nearest_index(times, t_star);
  const std::vector<std::string> cols{"fidelity", "c01", "c0n"};

  auto store = [&](const std::string& name, const std::string& note, const TransferRecord& r) {
    ObservableSeries s = make_series(name, note, cols);
    for (std::size_t k = 0; k < times.size(); ++k) s.append(times[k], column(r.values[k]));
    rep.series.push_back(std::move(s));
  };

  auto seeds_for = [&](int count) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) seeds[k] = trajectory_seed(cfg.seed, k);
    return seeds;
  };
  auto disordered = [&](double sigma, std::uint64_t seed) {
    ChainSpec c = chain;
    c.disorder_sigma = sigma;
    return sample_disorder(c, seed);
  };

  if (cfg.engines.effective) {
    const TransferRecord clean = transfer_effective(chain, design, dopt.effective, times);
    store("transfer_effective", "sigma = 0", clean);
    rep.check_bound("effective_fidelity_at_t_star", clean.values[i_star][0], 1.0 - 1e-6, true);
    rep.check_bound("effective_peak_end_concurrence", peak(clean, 2), 0.999, true);

    const auto seeds = seeds_for(cfg.ensemble);
    std::vector<std::vector<VectorXd>> members(seeds.size());
    detail::parallel_for(seeds.size(), cfg.threads, [&](std::size_t k) {
      members[k] =
          transfer_effective(disordered(cfg.sigma, seeds[k]), design, dopt.effective, times).values;
    });
    rep.ensembles.push_back(ensemble_stats("transfer_effective_disorder",
                                           "sigma = " + fmt(cfg.sigma) + " um", cols, times,
                                           members, seeds));

    // Common random numbers across the sweep: every sigma reuses the seeds.
    const auto sweep_seeds = seeds_for(cfg.sweep_ensemble);
    EnsembleSeries sweep;
    sweep.mean = make_series("sigma_sweep", "abscissa is sigma in um",
                             {"fidelity_at_t_star", "peak_fidelity"});
    sweep.spread = make_series("sigma_sweep_std", "abscissa is sigma in um",
                               {"fidelity_at_t_star", "peak_fidelity"});
    sweep.spread_kind = "std";
    sweep.realizations = cfg.sweep_ensemble;
    sweep.seeds = sweep_seeds;
    std::vector<double> sweep_means;
    std::vector<double> sigmas = cfg.sigma_sweep;
    std::sort(sigmas.begin(), sigmas.end());
    sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
    for (const double sigma : sigmas) {
      std::vector<VectorXd> stats(sweep_seeds.size());
      detail::parallel_for(sweep_seeds.size(), cfg.threads, [&](std::size_t k) {
        const TransferRecord r =
            transfer_effective(disordered(sigma, sweep_seeds[k]), design, dopt.effective, times);
        stats[k] = VectorXd(2);
        stats[k] << r.values[i_star][0], peak(r, 0);
      });
      VectorXd mean = VectorXd::Zero(2);
      for (const auto& s : stats) mean += s;
      mean /= static_cast<double>(stats.size());
      VectorXd var = VectorXd::Zero(2);
      for (const auto& s : stats) var += (s - mean).cwiseAbs2();
      if (stats.size() > 1) var /= static_cast<double>(stats.size() - 1);
      sweep.mean.append(sigma, column(mean));
      sweep.spread.append(sigma, column(var.cwiseSqrt()));
      sweep_means.push_back(mean[0]);
    }
    rep.ensembles.push_back(std::move(sweep));
    bool monotone = true;
    for (std::size_t k = 1; k < sweep_means.size(); ++k)
      monotone = monotone && sweep_means[k] < sweep_means[k - 1];
    std::string trend;
    for (std::size_t k = 0; k < sweep_means.size(); ++k)
      trend += (k ? ", " : "") + fmt(sigmas[k]) + ": " + fmt(sweep_means[k]);
    rep.check_true("fidelity_decreases_with_sigma", monotone, trend);
  }

  if (cfg.engines.exact) {
    std::vector<double> prob;
    const TransferRecord clean = transfer_exact(chain, design, times, &prob);
    store("transfer_exact", "sigma = 0, post-selected", clean);
    ObservableSeries p = make_series("transfer_exact_probability",
                                     "single-exciton post-selection probability");
    for (std::size_t k = 0; k < times.size(); ++k) p.append(times[k], scalar(prob[k]));
    rep.series.push_back(std::move(p));
    rep.check_bound("exact_peak_end_concurrence", peak(clean, 2), cfg.exact_concurrence_floor,
                    true);

    const auto seeds = seeds_for(cfg.exact_ensemble);
    std::vector<std::vector<VectorXd>> members(seeds.size());
    detail::parallel_for(seeds.size(), cfg.threads, [&](std::size_t k) {
      members[k] = transfer_exact(disordered(cfg.sigma, seeds[k]), design, times, nullptr).values;
    });
    rep.ensembles.push_back(ensemble_stats("transfer_exact_disorder",
                                           "sigma = " + fmt(cfg.sigma) + " um", cols, times,
                                           members, seeds));

    if (cfg.engines.effective) {
      // Reference: effective-ensemble mean peak fidelity minus three standard deviations.
      auto peaks = [&](const std::vector<std::vector<VectorXd>>& ms) {
        std::vector<double> out;
        for (const auto& m : ms) {
          double best = 0.0;
          for (const auto& v : m) best = std::max(best, v[0]);
          out.push_back(best);
        }
        return out;
      };
      const auto eff_seeds = seeds_for(cfg.ensemble);
      std::vector<std::vector<VectorXd>> eff(eff_seeds.size());
      detail::parallel_for(eff_seeds.size(), cfg.threads, [&](std::size_t k) {
        eff[k] = transfer_effective(disordered(cfg.sigma, eff_seeds[k]), design, dopt.effective,
                                    times)
                     .values;
      });
      const auto pe = peaks(eff);
      const auto px = peaks(members);
      double me = 0.0;
      for (const double x : pe) me += x;
      me /= static_cast<double>(pe.size());
      double ve = 0.0;
      for (const double x : pe) ve += (x - me) * (x - me);
      ve = pe.size() > 1 ? ve / static_cast<double>(pe.size() - 1) : 0.0;
      double mx = 0.0;
      for (const double x : px) mx += x;
      mx /= static_cast<double>(px.size());
      rep.add_parameter("effective_mean_peak_fidelity", me);
      rep.add_parameter("effective_std_peak_fidelity", std::sqrt(ve));
      rep.add_parameter("exact_mean_peak_fidelity", mx);
      rep.check_bound("exact_disorder_peak_fidelity", mx, me - 3.0 * std::sqrt(ve), true,
                      "exact ensemble mean of the peak fidelity against the effective reference");
    }
  }
  return rep;
}

// -------------------------------------------------------------------- pump

namespace {

struct PumpRun {
  std::vector<double> times;
  std::vector<VectorXd> profiles;
  std::vector<double> probability;
  DisplacementStats stats;
};

PumpRun run_pump_engine(const PumpConfig& cfg, double period, int range, bool exact) {
  const ChainSpec chain =
      ChainSpec::from_nn_shift(cfg.n_sites, cfg.spacing, cfg.v_ratio * cfg.delta, 0.0,
                               cfg.periodic ? Boundary::Periodic : Boundary::Open);
  PumpSchedule schedule{period, cfg.steepness};
  const DressingProfile dressing = pump_dressing(cfg.n_sites, cfg.omega, cfg.delta, schedule);
  EvolutionConfig ec;
  ec.t_final = period;
  ec.dt_max = cfg.dt_max;
  ec.n_outputs = cfg.n_outputs;
  ec.method = Method::Krylov;
  PumpRun run;
  if (exact) {
    const auto h = HamiltonianHandle::exact(chain, dressing);
    const auto psi0 = pump_initial_state(h.basis(), cfg.unit, cfg.periodic);
    evolve_unitary(h, psi0, ec, [&](double t, const QuantumState& psi) {
      const Projection p = project_to_sector(psi, 1);
      run.times.push_back(t);
      run.profiles.push_back(density_profile(p.rho));
      run.probability.push_back(p.probability);
    });
  } else {
    auto basis = SubspaceBasis::get(cfg.n_sites, Sector::excitation_number(1));
    EffectiveOptions opt;
    opt.hopping_range = range;
    opt.interaction_range = range;
    const auto h = HamiltonianHandle::effective(chain, dressing, basis, opt, cfg.delta);
    const auto psi0 = pump_initial_state(basis, cfg.unit, cfg.periodic);
    evolve_unitary(h, psi0, ec, [&](double t, const QuantumState& psi) {
      run.times.push_back(t);
      run.profiles.push_back(density_profile(psi));
      run.probability.push_back(psi.amplitudes.squaredNorm());
    });
  }
  const double reference = 3.0 * cfg.unit + 2.5;
  run.stats = cfg.periodic ? tracked_displacement(run.profiles, reference, 3.0)
                           : displacement_stats(run.profiles, reference, 3.0);
  return run;
}

}  // namespace

ExperimentReport run_thouless_pump(const PumpConfig& cfg) {
  if (cfg.n_sites % 3 != 0 || cfg.n_sites < 6)
    throw ValidationError("pump chain needs a multiple of 3 sites, at least 6");
  if (!(cfg.period > 0.0)) throw ValidationError("pump period must be positive");
  ExperimentReport rep;
  rep.id = "pump";
  rep.add_parameter("n_sites", cfg.n_sites);
  rep.add_parameter("spacing", cfg.spacing, "um");
  rep.add_parameter("omega", cfg.omega, "rad/us");
  rep.add_parameter("delta", cfg.delta, "rad/us");
  rep.add_parameter("v_nn", cfg.v_ratio * cfg.delta, "rad/us");
  rep.add_parameter("period", cfg.period, "us");
  rep.add_parameter("steepness", cfg.steepness);
  rep.add_parameter("dt_max", cfg.dt_max, "us");
  rep.add_parameter("periodic", cfg.periodic ? 1.0 : 0.0);
  rep.notes.push_back("displacements in units of l = 3d from site 3j + 2.5");

  std::vector<std::pair<std::string, PumpRun>> runs;
  if (cfg.engines.effective) {
    runs.emplace_back("nn", run_pump_engine(cfg, cfg.period, 1, false));
    runs.emplace_back("nnn", run_pump_engine(cfg, cfg.period, 2, false));
  }
  if (cfg.engines.exact) runs.emplace_back("exact", run_pump_engine(cfg, cfg.period, 0, true));

  for (const auto& [name, run] : runs) {
    ObservableSeries density = make_series("density_" + name, "<n_i> per site");
    ObservableSeries disp = make_series("displacement_" + name, "units of l",
                                        {"x_mean", "x2_mean", "probability"});
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      density.append(run.times[k], column(run.profiles[k]));
      VectorXd v(3);
      v << run.stats.mean[k], run.stats.mean_square[k], run.probability[k];
      disp.append(run.times[k], column(v));
    }
    rep.series.push_back(std::move(density));
    rep.series.push_back(std::move(disp));
    const double x_end = run.stats.mean.back();
    rep.check_bound("displacement_" + name, std::abs(x_end - 1.0), cfg.displacement_tolerance,
                    false, "<x(T)>/l = " + fmt(x_end));
  }

  if (!runs.empty()) {
    std::vector<std::string> names;
    for (const auto& r : runs) names.push_back(r.first);
    ObservableSeries x = make_series("x_mean", "<x>/l per engine", names);
    for (std::size_t k = 0; k < runs.front().second.times.size(); ++k) {
      VectorXd v(static_cast<Eigen::Index>(runs.size()));
      for (std::size_t e = 0; e < runs.size(); ++e)
        v[static_cast<Eigen::Index>(e)] = runs[e].second.stats.mean[k];
      x.append(runs.front().second.times[k], column(v));
    }
    rep.series.insert(rep.series.begin(), std::move(x));
  }

  if (cfg.engines.effective) {
    const PumpRun& nn = runs[0].second;
    const PumpRun& nnn = runs[1].second;
    double split = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nn.times.size(); ++k) {
      if (nn.times[k] < 0.5 * cfg.period - 1e-9) continue;
      const double a = nn.stats.mean_square[k];
      const double b = nnn.stats.mean_square[k];
      split = std::min(split, std::abs(b - a) / std::max(std::abs(a), 1e-300));
    }
    rep.check_bound("msd_nn_vs_nnn", split, cfg.msd_split, true,
                    "smallest relative <x^2> difference over t >= T/2");

    const PumpRun fast = run_pump_engine(cfg, cfg.nonadiabatic_factor * cfg.period, 1, false);
    ObservableSeries disp = make_series("displacement_nn_fast", "units of l, shortened period",
                                        {"x_mean", "x2_mean", "probability"});
    for (std::size_t k = 0; k < fast.times.size(); ++k) {
      VectorXd v(3);
      v << fast.stats.mean[k], fast.stats.mean_square[k], fast.probability[k];
      disp.append(fast.times[k], column(v));
    }
    rep.series.push_back(std::move(disp));
    const double x_fast = fast.stats.mean.back();
    rep.check_bound("nonadiabatic_displacement_error", std::abs(x_fast - 1.0),
                    cfg.displacement_tolerance, true,
                    "<x(T')>/l = " + fmt(x_fast) + " at T' = " +
                        fmt(cfg.nonadiabatic_factor * cfg.period) + " us");
  }
  return rep;
}

// ------------------------------------------------------------ bound states

namespace {

VectorXd diagonal_fractions(const MatrixXd& g2) {
  VectorXd w = g2_diagonal_weights(g2);
  const double total = w.sum();
  return total > 0.0 ? VectorXd(w / total) : w;
}

MatrixXd unflatten(const VectorXd& v, int n) {
  return Eigen::Map<const MatrixXd>(v.data(), n, n);
}

VectorXd flatten(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

struct PairRun {
  std::vector<double> times;
  std::vector<MatrixXd> g2;
  std::vector<double> probability;
  std::vector<MatrixXd> g2_error;  // trajectory standard errors, else empty
  int realizations = 1;
  std::vector<std::uint64_t> seeds;
};

void store_pair_run(ExperimentReport& rep, const std::string& name, const std::string& note,
                    const PairRun& run, int n_sites) {
  ObservableSeries g2 = make_series("g2_" + name, note + "; row-major N x N");
  ObservableSeries w = make_series("diagonal_weights_" + name,
                                   "fraction of g2 weight on |i - j| = 0..N-1");
  ObservableSeries p = make_series("probability_" + name, "two-exciton post-selection probability");
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    g2.append(run.times[k], run.g2[k]);
    w.append(run.times[k], column(diagonal_fractions(run.g2[k])));
    p.append(run.times[k], scalar(run.probability[k]));
  }
  if (!run.g2_error.empty()) {
    EnsembleSeries e;
    e.mean = g2;
    e.spread = make_series("g2_" + name + "_stderr", note);
    for (std::size_t k = 0; k < run.times.size(); ++k)
      e.spread.append(run.times[k], run.g2_error[k]);
    e.spread_kind = "stderr";
    e.realizations = run.realizations;
    e.seeds = run.seeds;
    rep.ensembles.push_back(std::move(e));
  }
  rep.series.push_back(std::move(g2));
  rep.series.push_back(std::move(w));
  rep.series.push_back(std::move(p));
  (void)n_sites;
}

void store_com(ExperimentReport& rep, const std::string& name, const ComDistribution& com) {
  ObservableSeries s = make_series("com_" + name, "final time; fitted curves on the same grid",
                                   {"position", "probability", "bessel_fit", "gaussian_fit"});
  MatrixXd table(com.positions.size(), 4);
  for (Eigen::Index k = 0; k < com.positions.size(); ++k) {
    const double x = com.positions[k];
    table(k, 0) = x;
    table(k, 1) = com.probability[k];
    table(k, 2) = com.bessel.fitted ? bessel_profile(x, com.center, com.bessel.params[0],
                                                     com.bessel.params[1])
                                    : 0.0;
    if (com.gaussian.fitted) {
      const auto& g = com.gaussian.params;
      table(k, 3) = g[0] * std::exp(-0.5 * std::pow((x - g[1]) / g[2], 2));
    } else {
      table(k, 3) = 0.0;
    }
  }
  s.append(0.0, table);
  rep.series.push_back(std::move(s));
}

void check_com(ExperimentReport& rep, const std::string& name, const ComDistribution& com,
               bool expect_bessel) {
  const bool ok = com.bessel.fitted && com.gaussian.fitted &&
                  (expect_bessel ? com.bessel.ssr < com.gaussian.ssr
                                 : com.gaussian.ssr < com.bessel.ssr);
  rep.check_true(std::string("com_prefers_") + (expect_bessel ? "bessel_" : "gaussian_") + name,
                 ok,
                 "ssr bessel " + fmt(com.bessel.ssr) + ", gaussian " + fmt(com.gaussian.ssr));
}

void check_high_order(ExperimentReport& rep, const std::string& name, const MatrixXd& g2) {
  const VectorXd w = diagonal_fractions(g2);
  bool dominant = true;
  for (Eigen::Index d = 1; d < w.size(); ++d)
    if (d != 2) dominant = dominant && w[2] > w[d];
  rep.check_true("second_diagonal_dominant_" + name, dominant,
                 "w1 " + fmt(w[1]) + ", w2 " + fmt(w[2]) + ", w3 " + fmt(w[3]));
  rep.check_true("first_diagonal_minimal_" + name, w[1] < w[2] && w[1] < w[3],
                 "w1 " + fmt(w[1]) + ", w2 " + fmt(w[2]) + ", w3 " + fmt(w[3]));
}

}  // namespace

ExperimentReport run_bound_state_transport(const BoundConfig& cfg) {
  ExperimentReport rep;
  rep.id = "bound";
  rep.add_parameter("omega", cfg.omega, "rad/us");
  rep.add_parameter("spacing", cfg.spacing, "um");
  rep.add_parameter("seed", static_cast<double>(cfg.seed));
  rep.notes.push_back("g2 post-selected on two excitons; diagonal weights normalized to one");

  if (cfg.run_dimer) {
    const int n = cfg.dimer_sites;
    if (cfg.dimer_left < 0 || cfg.dimer_left + 1 >= n)
      throw ValidationError("dimer start outside the chain");
    rep.add_parameter("dimer_sites", n);
    rep.add_parameter("dimer_delta", cfg.dimer_delta, "rad/us");
    rep.add_parameter("dimer_v_nn", cfg.dimer_v_ratio * cfg.dimer_delta, "rad/us");
    rep.add_parameter("dimer_t_final", cfg.dimer_t_final, "us");
    const ChainSpec chain =
        ChainSpec::from_nn_shift(n, cfg.spacing, cfg.dimer_v_ratio * cfg.dimer_delta);
    const DressingProfile dressing = DressingProfile::homogeneous(n, cfg.omega, cfg.dimer_delta);
    const Config start = bit(cfg.dimer_left) | bit(cfg.dimer_left + 1);
    EvolutionConfig ec;
    ec.t_final = cfg.dimer_t_final;
    ec.n_outputs = cfg.n_outputs;

    auto min_first = [](const PairRun& r) {
      double lo = 1.0;
      for (const auto& g : r.g2) lo = std::min(lo, diagonal_fractions(g)[1]);
      return lo;
    };
    if (cfg.engines.effective) {
      auto basis = SubspaceBasis::get(n, Sector::dimer());
      const auto h = HamiltonianHandle::effective(chain, dressing, basis, {}, cfg.dimer_delta);
      ec.method = Method::DenseExpm;
      PairRun run;
      evolve_unitary(h, QuantumState::basis_state(basis, start), ec,
                     [&](double t, const QuantumState& psi) {
                       run.times.push_back(t);
                       run.g2.push_back(g2_correlation(psi));
                       run.probability.push_back(1.0);
                     });
      store_pair_run(rep, "dimer_effective", "dimer sector", run, n);
      rep.check_bound("dimer_first_diagonal_effective", min_first(run), cfg.dimer_weight_floor,
                      true, "smallest |i-j| = 1 fraction over time");
    }
    if (cfg.engines.exact) {
      const auto h = HamiltonianHandle::exact(chain, dressing);
      ec.method = Method::Krylov;
      PairRun run;
      evolve_unitary(h, QuantumState::basis_state(h.basis(), start), ec,
                     [&](double t, const QuantumState& psi) {
                       const Projection p = project_to_sector(psi, 2);
                       run.times.push_back(t);
                       run.g2.push_back(g2_correlation(p.rho));
                       run.probability.push_back(p.probability);
                     });
      store_pair_run(rep, "dimer_exact", "exact model", run, n);
      rep.check_bound("dimer_first_diagonal_exact", min_first(run), cfg.dimer_weight_floor, true,
                      "smallest |i-j| = 1 fraction over time");
    }
  }

  if (cfg.run_high_order) {
    const int n = cfg.sites;
    if (cfg.left < 0 || cfg.left + 2 >= n) throw ValidationError("pair start outside the chain");
    if (cfg.gamma < 0.0) throw ValidationError("dephasing rate must be non-negative");
    rep.add_parameter("sites", n);
    rep.add_parameter("delta", cfg.delta, "rad/us");
    rep.add_parameter("v_nn", cfg.v_ratio * cfg.delta, "rad/us");
    rep.add_parameter("t_final", cfg.t_final, "us");
    rep.add_parameter("gamma", cfg.gamma, "1/us");
    const ChainSpec chain = ChainSpec::from_nn_shift(n, cfg.spacing, cfg.v_ratio * cfg.delta);
    const DressingProfile dressing = DressingProfile::homogeneous(n, cfg.omega, cfg.delta);
    const Config start = bit(cfg.left) | bit(cfg.left + 2);
    const double center = cfg.left + 1.0;
    EvolutionConfig ec;
    ec.t_final = cfg.t_final;
    ec.n_outputs = cfg.n_outputs;
    for (const double t : cfg.map_times)
      if (t < 0.0 || t > cfg.t_final) throw ValidationError("map time outside the run");
    ec.output_times = linspace(cfg.t_final, cfg.n_outputs);
    for (const double t : cfg.map_times) ec.output_times = with_time(ec.output_times, t);

    if (cfg.engines.effective) {
      auto basis = SubspaceBasis::get(n, Sector::excitation_number(2));
      const auto h = HamiltonianHandle::effective(chain, dressing, basis, {}, cfg.delta);
      const auto psi0 = QuantumState::basis_state(basis, start);
      ec.method = Method::DenseExpm;
      PairRun coherent;
      evolve_unitary(h, psi0, ec, [&](double t, const QuantumState& psi) {
        coherent.times.push_back(t);
        coherent.g2.push_back(g2_correlation(psi));
        coherent.probability.push_back(1.0);
      });
      store_pair_run(rep, "effective_coherent", "two-exciton sector", coherent, n);
      check_high_order(rep, "effective_coherent", coherent.g2.back());
      const ComDistribution com = com_distribution(coherent.g2.back(), center);
      store_com(rep, "effective_coherent", com);
      check_com(rep, "effective_coherent", com, true);

      if (cfg.gamma > 0.0) {
        EvolutionConfig lc = ec;
        lc.method = Method::Krylov;
        lc.rel_tol = 1e-9;
        PairRun dephased;
        evolve_lindblad(h, NoiseSpec{cfg.gamma, 0.0}, DensityOperator::pure(psi0), lc,
                        [&](double t, const DensityOperator& rho) {
                          dephased.times.push_back(t);
                          dephased.g2.push_back(g2_correlation(rho));
                          dephased.probability.push_back(rho.trace().real());
                        });
        store_pair_run(rep, "effective_dephased", "two-exciton sector, Lindblad", dephased, n);
        check_high_order(rep, "effective_dephased", dephased.g2.back());
        const ComDistribution cd = com_distribution(dephased.g2.back(), center);
        store_com(rep, "effective_dephased", cd);
        check_com(rep, "effective_dephased", cd, false);
      }
    }
    if (cfg.engines.exact) {
      const auto h = HamiltonianHandle::exact(chain, dressing);
      EvolutionConfig xc = ec;
      xc.method = Method::Krylov;
      PairRun coherent;
      evolve_unitary(h, QuantumState::basis_state(h.basis(), start), xc,
                     [&](double t, const QuantumState& psi) {
                       const Projection p = project_to_sector(psi, 2);
                       coherent.times.push_back(t);
                       coherent.g2.push_back(g2_correlation(p.rho));
                       coherent.probability.push_back(p.probability);
                     });
      store_pair_run(rep, "exact_coherent", "exact model, post-selected", coherent, n);
      check_high_order(rep, "exact_coherent", coherent.g2.back());
      const ComDistribution com = com_distribution(coherent.g2.back(), center);
      store_com(rep, "exact_coherent", com);
      check_com(rep, "exact_coherent", com, true);
    }
    if (cfg.engines.trajectory && cfg.gamma > 0.0) {
      if (cfg.trajectories < 1) throw ValidationError("trajectory count must be positive");
      const auto h = HamiltonianHandle::exact(chain, dressing);
      EvolutionConfig tc = ec;
      tc.method = Method::Krylov;
      tc.trajectory_count = cfg.trajectories;
      tc.seed = cfg.seed;
      tc.threads = cfg.threads;
      TrajectoryRequest req;
      req.post_select = 2;
      req.observable = [](double, const QuantumState& q) {
        return flatten(g2_correlation(q));
      };
      const TrajectoryResult tr = evolve_trajectories(
          h, NoiseSpec{cfg.gamma, 0.0}, QuantumState::basis_state(h.basis(), start), tc, req);
      PairRun run;
      run.times = tr.times;
      run.realizations = tr.trajectory_count;
      run.seeds = tr.seeds;
      for (std::size_t k = 0; k < tr.times.size(); ++k) {
        run.g2.push_back(unflatten(tr.mean[k], n));
        run.g2_error.push_back(unflatten(tr.std_error[k], n));
        run.probability.push_back(tr.probability[k]);
      }
      store_pair_run(rep, "exact_dephased", "exact model, trajectories, post-selected", run, n);
      rep.add_parameter("trajectories", tr.trajectory_count);
      rep.add_parameter("trajectory_jumps", static_cast<double>(tr.jump_count));
      check_high_order(rep, "exact_dephased", run.g2.back());
      const ComDistribution cd = com_distribution(run.g2.back(), center);
      store_com(rep, "exact_dephased", cd);
      check_com(rep, "exact_dephased", cd, false);
    }
  }
  return rep;
}

// --------------------------------------------------------------------- HRS

Eigen::VectorXd homogeneous_hopping(double omega, double delta, double v_nn, int range) {
  if (range < 1) throw ValidationError("hopping range must be at least 1");
  VectorXd j(range);
  for (int d = 1; d <= range; ++d) {
    const double v = v_nn / std::pow(static_cast<double>(d), 6);
    j[d - 1] = omega * omega * v / (4.0 * delta * (delta + v));
  }
  return j;
}

ExperimentReport run_hrs_crossover(const HrsConfig& cfg) {
  if (cfg.n_sites < 3 || cfg.n_sites % 2 == 0)
    throw ValidationError("HRS comparison needs an odd chain of at least 3 sites");
  if (cfg.hrs_sites < 3 || cfg.hrs_sites % 2 == 0)
    throw ValidationError("HRS chain needs an odd number of sites");
  ExperimentReport rep;
  rep.id = "hrs";
  const double v_nn = cfg.v_ratio * cfg.delta;
  const VectorXd hopping = homogeneous_hopping(cfg.omega, cfg.delta, v_nn, cfg.hopping_range);
  double s = 0.0;
  for (Eigen::Index d = 0; d < hopping.size(); ++d) s += std::pow((d + 1) * hopping[d], 2);
  rep.add_parameter("n_sites", cfg.n_sites);
  rep.add_parameter("omega", cfg.omega, "rad/us");
  rep.add_parameter("delta", cfg.delta, "rad/us");
  rep.add_parameter("v_nn", v_nn, "rad/us");
  rep.add_parameter("sum_d2_j2", s, "rad^2/us^2");
  rep.add_parameter("seed", static_cast<double>(cfg.seed));
  for (Eigen::Index d = 0; d < hopping.size(); ++d)
    rep.add_parameter("j_" + std::to_string(d + 1), hopping[d], "rad/us");

  const std::vector<double> times = linspace(cfg.t_final, cfg.n_outputs);
  const int hrs_origin = cfg.hrs_sites / 2;

  std::vector<double> gammas = cfg.gammas;
  for (const double g : gammas)
    if (!(g > 0.0)) throw ValidationError("HRS crossover rates must be positive");

  // Ballistic limit and the closed form on a long chain.
  {
    const HrsResult ballistic = evolve_hrs(hopping, 0.0, cfg.hrs_sites, hrs_origin, times);
    double err = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double law = 2.0 * s * times[k] * times[k];
      err = std::max(err, std::abs(ballistic.msd[k] - law) / law);
    }
    rep.check_bound("hrs_ballistic_limit", err, cfg.hrs_tolerance, false,
                    "max relative error against 2 S t^2");
  }
  for (const double g : gammas) {
    const std::string tag = fmt(g);
    const HrsResult r = evolve_hrs(hopping, g, cfg.hrs_sites, hrs_origin, times);
    ObservableSeries series = make_series("msd_hrs_gamma_" + tag, "<x^2> in sites^2",
                                          {"hrs", "closed_form"});
    double err = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double law = hrs_msd_closed_form(hopping, g, times[k]);
      VectorXd v(2);
      v << r.msd[k], law;
      series.append(times[k], column(v));
      if (k > 0) err = std::max(err, std::abs(r.msd[k] - law) / law);
    }
    rep.series.push_back(std::move(series));
    rep.check_bound("hrs_closed_form_gamma_" + tag, err, cfg.hrs_tolerance, false,
                    "max relative error on " + std::to_string(cfg.hrs_sites) + " sites");

    if (cfg.engines.trajectory || cfg.engines.exact) {
      const ChainSpec chain = ChainSpec::from_nn_shift(cfg.n_sites, cfg.spacing, v_nn);
      const DressingProfile dressing =
          DressingProfile::homogeneous(cfg.n_sites, cfg.omega, cfg.delta);
      const auto h = HamiltonianHandle::exact(chain, dressing);
      const int origin = cfg.n_sites / 2;
      EvolutionConfig tc;
      tc.t_final = cfg.t_final;
      tc.output_times = times;
      tc.method = Method::Krylov;
      tc.trajectory_count = cfg.trajectories;
      tc.seed = cfg.seed;
      tc.threads = cfg.threads;
      TrajectoryRequest req;
      req.post_select = 1;
      req.observable = [origin](double, const QuantumState& q) {
        const VectorXd n = density_profile(q);
        double x2 = 0.0;
        for (Eigen::Index i = 0; i < n.size(); ++i) x2 += std::pow(i - origin, 2) * n[i];
        VectorXd out(1);
        out << x2;
        return out;
      };
      const TrajectoryResult tr = evolve_trajectories(
          h, NoiseSpec{g, 0.0}, QuantumState::basis_state(h.basis(), bit(origin)), tc, req);
      EnsembleSeries e;
      e.mean = make_series("msd_exact_gamma_" + tag, "<x^2> in sites^2, post-selected",
                           {"msd", "closed_form", "probability"});
      e.spread = make_series("msd_exact_gamma_" + tag + "_stderr", "standard errors",
                             {"msd", "closed_form", "probability"});
      e.spread_kind = "stderr";
      e.realizations = tr.trajectory_count;
      e.seeds = tr.seeds;
      double worst = 0.0;
      for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const double law = hrs_msd_closed_form(hopping, g, tr.times[k]);
        VectorXd v(3);
        v << tr.mean[k][0], law, tr.probability[k];
        VectorXd se(3);
        se << tr.std_error[k][0], 0.0, tr.probability_error[k];
        e.mean.append(tr.times[k], column(v));
        e.spread.append(tr.times[k], column(se));
        if (k > 0) worst = std::max(worst, std::abs(tr.mean[k][0] - law) / law);
      }
      rep.ensembles.push_back(std::move(e));
      rep.check_bound("exact_law_gamma_" + tag, worst, cfg.law_tolerance, false,
                      "max relative deviation of the post-selected exact <x^2> from the law");
    }
  }

  // Decay factorization in the effective single-exciton sector.
  if (cfg.engines.effective) {
    const double delta = cfg.factorization_ratio * cfg.omega;
    const int n = cfg.factorization_sites;
    const ChainSpec chain = ChainSpec::from_nn_shift(n, cfg.spacing, cfg.v_ratio * delta);
    const DressingProfile dressing = DressingProfile::homogeneous(n, cfg.omega, delta);
    auto basis = SubspaceBasis::get(n, Sector::excitation_number(1));
    const auto h = HamiltonianHandle::effective(chain, dressing, basis, {}, delta);
    const auto rho0 = DensityOperator::pure(QuantumState::basis_state(basis, bit(n / 2)));
    EvolutionConfig lc;
    lc.t_final = cfg.factorization_t_final;
    lc.n_outputs = 51;
    lc.method = Method::AdaptiveRk;
    lc.rel_tol = 1e-11;
    lc.abs_tol = 1e-13;
    const DensitySeries full = evolve_lindblad(
        h, NoiseSpec{cfg.factorization_gamma, cfg.factorization_kappa}, rho0, lc);
    const DensitySeries deph =
        evolve_lindblad(h, NoiseSpec{cfg.factorization_gamma, 0.0}, rho0, lc);
    double worst = 0.0;
    double trace_err = 0.0;
    ObservableSeries series = make_series("decay_factorization", "single-exciton sector",
                                          {"trace", "exp_kappa_t", "max_abs_difference"});
    for (std::size_t k = 0; k < full.times.size(); ++k) {
      const double tr = full.states[k].trace().real();
      const double diff =
          (full.states[k].matrix / tr - deph.states[k].matrix).cwiseAbs().maxCoeff();
      const double expected = std::exp(-cfg.factorization_kappa * full.times[k]);
      worst = std::max(worst, diff);
      trace_err = std::max(trace_err, std::abs(tr - expected));
      VectorXd v(3);
      v << tr, expected, diff;
      series.append(full.times[k], column(v));
    }
    rep.series.push_back(std::move(series));
    rep.add_parameter("factorization_delta", delta, "rad/us");
    rep.add_parameter("factorization_gamma", cfg.factorization_gamma, "1/us");
    rep.add_parameter("factorization_kappa", cfg.factorization_kappa, "1/us");
    rep.check_bound("decay_factorization", worst, cfg.factorization_tolerance, false,
                    "max |rho_full / tr - rho_dephasing|");
    rep.check_bound("decay_trace", trace_err, cfg.factorization_tolerance, false,
                    "max |tr rho - exp(-kappa t)|");
  }
  return rep;
}

// ------------------------------------------------------------------- Chern

ExperimentReport run_chern(const ChernConfig& cfg) {
  ExperimentReport rep;
  rep.id = "chern";
  const double v_nn = cfg.v_ratio * cfg.delta;
  const std::optional<double> v_nnn =
      cfg.next_nearest ? std::optional<double>(v_nn / 64.0) : std::nullopt;
  rep.add_parameter("omega", cfg.omega, "rad/us");
  rep.add_parameter("delta", cfg.delta, "rad/us");
  rep.add_parameter("v_nn", v_nn, "rad/us");
  rep.add_parameter("next_nearest", cfg.next_nearest ? 1.0 : 0.0);
  const auto bloch = make_rice_mele_bloch(cfg.omega, cfg.delta, v_nn, v_nnn);
  const double u = rice_mele_coefficients(cfg.omega, cfg.delta, v_nn, v_nnn, 0.0).u;
  rep.add_parameter("u", u, "rad/us");
  for (const int grid : cfg.grids) {
    const ChernResult r = chern_numbers(bloch, grid, grid);
    const std::string tag = std::to_string(grid);
    ObservableSeries s = make_series("chern_" + tag, "per band, ascending energy",
                                     {"chern", "raw", "gap_above_over_u"});
    MatrixXd table(static_cast<Eigen::Index>(r.chern.size()), 3);
    for (std::size_t b = 0; b < r.chern.size(); ++b) {
      table(b, 0) = r.chern[b];
      table(b, 1) = r.raw[b];
      table(b, 2) = b < r.min_gap.size() ? r.min_gap[b] / u : 0.0;
    }
    s.append(0.0, table);
    rep.series.push_back(std::move(s));
    int sum = 0;
    std::string got;
    for (std::size_t b = 0; b < r.chern.size(); ++b) {
      sum += r.chern[b];
      got += (b ? ", " : "") + std::to_string(r.chern[b]);
    }
    rep.check_true("chern_" + tag, r.chern == cfg.expected, "(" + got + ")");
    rep.check_true("chern_sum_" + tag, sum == 0, "sum " + std::to_string(sum));
  }
  return rep;
}

}  // namespace rydex
