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

#include "config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <yaml-cpp/yaml.h>

#include "rydex/error.hpp"

namespace rydex::cli {

namespace {

const std::vector<std::pair<std::string, Experiment>> kExperiments{
    {"transfer", Experiment::Transfer}, {"pump", Experiment::Pump},
    {"bound", Experiment::Bound},       {"hrs", Experiment::Hrs},
    {"chern", Experiment::Chern},       {"derive", Experiment::Derive},
    {"validate", Experiment::Validate}};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string p;
  while (std::getline(ss, p, '.')) parts.push_back(p);
  return parts;
}

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Frequency:
      return "frequency";
    case Dimension::Rate:
      return "rate";
    case Dimension::Time:
      return "time";
    default:
      return "length";
  }
}

/// Reads keys from the document and tracks which ones were consumed.
class Reader {
 public:
  Reader(const YAML::Node& root, RunConfig& cfg) : root_(root), cfg_(cfg) {}

  void quantity(const std::string& key, Dimension dim, double& v) {
    if (const auto n = find(key)) v = scalar_quantity(*n, key, dim);
  }

  void optional_quantity(const std::string& key, Dimension dim, std::optional<double>& v) {
    const auto n = find(key);
    if (!n) return;
    if (trim(scalar(*n, key)) == "auto") {
      v.reset();
    } else {
      v = scalar_quantity(*n, key, dim);
    }
  }

  void number(const std::string& key, double& v) {
    if (const auto n = find(key)) v = scalar_number(*n, key);
  }

  void integer(const std::string& key, int& v) {
    if (const auto n = find(key)) v = as<int>(*n, key, "an integer");
  }

  void boolean(const std::string& key, bool& v) {
    if (const auto n = find(key)) v = as<bool>(*n, key, "true or false");
  }

  void text(const std::string& key, std::string& v) {
    if (const auto n = find(key)) v = scalar(*n, key);
  }

  void quantity_list(const std::string& key, Dimension dim, std::vector<double>& v) {
    const auto n = find(key);
    if (!n) return;
    v.clear();
    for (const auto& item : sequence(*n, key)) v.push_back(scalar_quantity(item, key, dim));
  }

  void integer_list(const std::string& key, std::vector<int>& v) {
    const auto n = find(key);
    if (!n) return;
    v.clear();
    for (const auto& item : sequence(*n, key)) v.push_back(as<int>(item, key, "an integer"));
  }

  void seeds(const std::string& key, std::vector<std::uint64_t>& v) {
    const auto n = find(key);
    if (!n) return;
    v.clear();
    for (const auto& item : sequence(*n, key))
      v.push_back(as<std::uint64_t>(item, key, "a non-negative integer"));
  }

  template <typename E>
  void choice(const std::string& key, E& v, const std::vector<std::pair<std::string, E>>& names) {
    const auto n = find(key);
    if (!n) return;
    const std::string s = scalar(*n, key);
    for (const auto& [name, value] : names) {
      if (name == s) {
        v = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& nv : names) allowed += (allowed.empty() ? "" : ", ") + nv.first;
    throw ParseError(key + ": '" + s + "' is not one of " + allowed, line_of(*n));
  }

  void engines(const std::string& key, EngineSet& v) {
    const auto n = find(key);
    if (!n) return;
    v = EngineSet{false, false, false};
    for (const auto& item : sequence(*n, key)) {
      const std::string s = scalar(item, key);
      if (s == "effective") {
        v.effective = true;
      } else if (s == "exact") {
        v.exact = true;
      } else if (s == "trajectory") {
        v.trajectory = true;
      } else {
        throw ParseError(key + ": unknown engine '" + s + "'", line_of(item));
      }
    }
  }

  void formats(const std::string& key, OutputConfig& v) {
    const auto n = find(key);
    if (!n) return;
    v.csv = v.json = v.svg = false;
    for (const auto& item : sequence(*n, key)) {
      const std::string s = scalar(item, key);
      if (s == "csv") {
        v.csv = true;
      } else if (s == "json") {
        v.json = true;
      } else if (s == "svg") {
        v.svg = true;
      } else {
        throw ParseError(key + ": unknown format '" + s + "'", line_of(item));
      }
    }
  }

  /// Any key left unread is unknown for this experiment.
  void finish() const { check_unused(root_, ""); }

 private:
  std::optional<YAML::Node> find(const std::string& key) {
    std::vector<YAML::Node> chain{root_};
    for (const auto& part : split_path(key)) {
      const YAML::Node& p = chain.back();
      if (!p.IsMap()) {
        throw ParseError("'" + key + "' expects a mapping above it", line_of(p));
      }
      const YAML::Node child = p[part];
      if (!child.IsDefined() || child.IsNull()) {
        cfg_.provenance[key] = "default";
        return std::nullopt;
      }
      chain.push_back(child);
    }
    used_.insert(key);
    cfg_.provenance[key] = "file";
    return chain.back();
  }

  std::string scalar(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) throw ParseError(key + " must be a scalar value", line_of(n));
    return n.Scalar();
  }

  std::vector<YAML::Node> sequence(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence()) throw ParseError(key + " must be a list", line_of(n));
    std::vector<YAML::Node> out;
    for (const auto& item : n) out.push_back(item);
    return out;
  }

  template <typename T>
  T as(const YAML::Node& n, const std::string& key, const char* what) const {
    const std::string s = scalar(n, key);
    if constexpr (std::is_same_v<T, bool>) {
      if (s == "true") return true;
      if (s == "false") return false;
    } else {
      T value{};
      const auto r = std::from_chars(s.data(), s.data() + s.size(), value);
      if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return value;
    }
    throw ParseError(key + " must be " + what + ", got '" + s + "'", line_of(n));
  }

  double scalar_number(const YAML::Node& n, const std::string& key) const {
    const std::string s = trim(scalar(n, key));
    double value = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), value);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw ParseError(key + " must be a plain number, got '" + s + "'", line_of(n));
    return value;
  }

  double scalar_quantity(const YAML::Node& n, const std::string& key, Dimension dim) const {
    try {
      return parse_quantity(scalar(n, key), dim, cfg_.rate_convention);
    } catch (const ParseError& e) {
      throw ParseError(key + ": " + e.what(), line_of(n));
    }
  }

  void check_unused(const YAML::Node& node, const std::string& prefix) const {
    for (const auto& kv : node) {
      const std::string name = kv.first.as<std::string>();
      const std::string path = prefix.empty() ? name : prefix + "." + name;
      if (used_.count(path)) continue;
      if (kv.second.IsMap()) {
        check_unused(kv.second, path);
        continue;
      }
      throw ParseError("unknown key '" + path + "' for experiment " +
                           experiment_name(cfg_.experiment),
                       line_of(kv.first));
    }
  }

  const YAML::Node& root_;
  RunConfig& cfg_;
  std::set<std::string> used_{"experiment"};
};

/// Builds the canonical document from the same schema.
class Writer {
 public:
  explicit Writer(YAML::Node& root) : root_(root) {}

  void quantity(const std::string& key, Dimension dim, const double& v) {
    set(key, YAML::Node(format_quantity(v, dim)));
  }
  void optional_quantity(const std::string& key, Dimension dim, const std::optional<double>& v) {
    set(key, YAML::Node(v ? format_quantity(*v, dim) : std::string("auto")));
  }
  void number(const std::string& key, const double& v) { set(key, YAML::Node(shortest(v))); }
  void integer(const std::string& key, const int& v) { set(key, YAML::Node(std::to_string(v))); }
  void boolean(const std::string& key, const bool& v) {
    set(key, YAML::Node(v ? "true" : "false"));
  }
  void text(const std::string& key, const std::string& v) { set(key, YAML::Node(v)); }
  void quantity_list(const std::string& key, Dimension dim, const std::vector<double>& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (const double x : v) n.push_back(format_quantity(x, dim));
    n.SetStyle(YAML::EmitterStyle::Flow);
    set(key, n);
  }
  void integer_list(const std::string& key, const std::vector<int>& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (const int x : v) n.push_back(std::to_string(x));
    n.SetStyle(YAML::EmitterStyle::Flow);
    set(key, n);
  }
  void seeds(const std::string& key, const std::vector<std::uint64_t>& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (const auto x : v) n.push_back(std::to_string(x));
    n.SetStyle(YAML::EmitterStyle::Flow);
    set(key, n);
  }
  template <typename E>
  void choice(const std::string& key, const E& v,
              const std::vector<std::pair<std::string, E>>& names) {
    for (const auto& [name, value] : names)
      if (value == v) set(key, YAML::Node(name));
  }
  void engines(const std::string& key, const EngineSet& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    if (v.effective) n.push_back("effective");
    if (v.exact) n.push_back("exact");
    if (v.trajectory) n.push_back("trajectory");
    n.SetStyle(YAML::EmitterStyle::Flow);
    set(key, n);
  }
  void formats(const std::string& key, const OutputConfig& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    if (v.csv) n.push_back("csv");
    if (v.json) n.push_back("json");
    if (v.svg) n.push_back("svg");
    n.SetStyle(YAML::EmitterStyle::Flow);
    set(key, n);
  }

 private:
  void set(const std::string& key, const YAML::Node& value) {
    const auto parts = split_path(key);
    YAML::Node cur = root_;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      YAML::Node next = cur[parts[k]];
      if (!next.IsMap()) next = YAML::Node(YAML::NodeType::Map);
      cur[parts[k]] = next;
      cur.reset(next);
    }
    cur[parts.back()] = value;
  }

  YAML::Node& root_;
};

const std::vector<std::pair<std::string, bool>> kBoundary{{"open", false}, {"periodic", true}};
const std::vector<std::pair<std::string, RateConvention>> kConventions{
    {"plain", RateConvention::Plain}, {"angular", RateConvention::Angular}};
const std::vector<std::pair<std::string, GuardPolicy>> kPolicies{
    {"ignore", GuardPolicy::Ignore}, {"warn", GuardPolicy::Warn}, {"error", GuardPolicy::Error}};

/// Single schema shared by parsing and emission. Key order is document order.
template <typename V, typename C>
void schema(V& v, C& c) {
  using D = Dimension;
  v.seeds("seeds", c.seeds);
  v.integer("threads", c.threads);
  const Experiment e = c.experiment;
  if (e == Experiment::Transfer || e == Experiment::Pump || e == Experiment::Bound ||
      e == Experiment::Hrs)
    v.engines("engines", c.engines);

  switch (e) {
    case Experiment::Transfer: {
      auto& t = c.transfer;
      v.integer("chain.sites", t.n_atoms);
      v.quantity("chain.spacing", D::Length, t.spacing);
      v.number("chain.v_ratio", t.v_ratio);
      v.quantity("chain.disorder_sigma", D::Length, t.sigma);
      v.quantity("dressing.omega", D::Frequency, t.omega);
      v.quantity("dressing.delta", D::Frequency, t.delta);
      v.integer("evolution.outputs", t.n_outputs);
      v.number("transfer.duration", t.duration);
      v.optional_quantity("transfer.base_rate", D::Frequency, t.base_rate);
      v.optional_quantity("transfer.mu", D::Frequency, t.mu);
      v.integer("transfer.ensemble", t.ensemble);
      v.integer("transfer.exact_ensemble", t.exact_ensemble);
      v.quantity_list("transfer.sigma_sweep", D::Length, t.sigma_sweep);
      v.integer("transfer.sweep_ensemble", t.sweep_ensemble);
      v.number("transfer.concurrence_floor", t.exact_concurrence_floor);
      break;
    }
    case Experiment::Pump: {
      auto& p = c.pump;
      v.integer("chain.sites", p.n_sites);
      v.quantity("chain.spacing", D::Length, p.spacing);
      v.number("chain.v_ratio", p.v_ratio);
      v.choice("chain.boundary", p.periodic, kBoundary);
      v.quantity("dressing.omega", D::Frequency, p.omega);
      v.quantity("dressing.delta", D::Frequency, p.delta);
      v.quantity("evolution.dt_max", D::Time, p.dt_max);
      v.integer("evolution.outputs", p.n_outputs);
      v.quantity("pump.period", D::Time, p.period);
      v.number("pump.steepness", p.steepness);
      v.integer("pump.unit", p.unit);
      v.number("pump.nonadiabatic_factor", p.nonadiabatic_factor);
      v.number("pump.displacement_tolerance", p.displacement_tolerance);
      v.number("pump.msd_split", p.msd_split);
      break;
    }
    case Experiment::Bound: {
      auto& b = c.bound;
      v.quantity("chain.spacing", D::Length, b.spacing);
      v.quantity("dressing.omega", D::Frequency, b.omega);
      v.choice("noise.rate_convention", c.rate_convention, kConventions);
      v.quantity("noise.gamma", D::Rate, b.gamma);
      v.integer("evolution.outputs", b.n_outputs);
      v.integer("evolution.trajectories", b.trajectories);
      v.boolean("dimer.enabled", b.run_dimer);
      v.integer("dimer.sites", b.dimer_sites);
      v.quantity("dimer.delta", D::Frequency, b.dimer_delta);
      v.number("dimer.v_ratio", b.dimer_v_ratio);
      v.integer("dimer.start", b.dimer_left);
      v.quantity("dimer.t_final", D::Time, b.dimer_t_final);
      v.number("dimer.weight_floor", b.dimer_weight_floor);
      v.boolean("high_order.enabled", b.run_high_order);
      v.integer("high_order.sites", b.sites);
      v.quantity("high_order.delta", D::Frequency, b.delta);
      v.number("high_order.v_ratio", b.v_ratio);
      v.integer("high_order.start", b.left);
      v.quantity("high_order.t_final", D::Time, b.t_final);
      v.quantity_list("high_order.map_times", D::Time, b.map_times);
      break;
    }
    case Experiment::Hrs: {
      auto& h = c.hrs;
      v.integer("chain.sites", h.n_sites);
      v.quantity("chain.spacing", D::Length, h.spacing);
      v.number("chain.v_ratio", h.v_ratio);
      v.quantity("dressing.omega", D::Frequency, h.omega);
      v.quantity("dressing.delta", D::Frequency, h.delta);
      v.choice("noise.rate_convention", c.rate_convention, kConventions);
      v.quantity_list("noise.gammas", D::Rate, h.gammas);
      v.quantity("evolution.t_final", D::Time, h.t_final);
      v.integer("evolution.outputs", h.n_outputs);
      v.integer("evolution.trajectories", h.trajectories);
      v.integer("hrs.sites", h.hrs_sites);
      v.integer("hrs.hopping_range", h.hopping_range);
      v.number("hrs.law_tolerance", h.law_tolerance);
      v.number("hrs.tolerance", h.hrs_tolerance);
      v.quantity("factorization.gamma", D::Rate, h.factorization_gamma);
      v.quantity("factorization.kappa", D::Rate, h.factorization_kappa);
      v.number("factorization.detuning_ratio", h.factorization_ratio);
      v.integer("factorization.sites", h.factorization_sites);
      v.quantity("factorization.t_final", D::Time, h.factorization_t_final);
      v.number("factorization.tolerance", h.factorization_tolerance);
      break;
    }
    case Experiment::Chern: {
      auto& ch = c.chern;
      v.quantity("chain.spacing", D::Length, ch.spacing);
      v.number("chain.v_ratio", ch.v_ratio);
      v.quantity("dressing.omega", D::Frequency, ch.omega);
      v.quantity("dressing.delta", D::Frequency, ch.delta);
      v.boolean("chern.next_nearest", ch.next_nearest);
      v.integer_list("chern.grids", ch.grids);
      v.integer_list("chern.expected", ch.expected);
      break;
    }
    case Experiment::Derive: {
      auto& d = c.derive;
      v.integer("chain.sites", d.n_sites);
      v.quantity("chain.spacing", D::Length, d.spacing);
      v.number("chain.v_ratio", d.v_ratio);
      v.choice("chain.boundary", d.periodic, kBoundary);
      v.quantity("dressing.omega", D::Frequency, d.omega);
      v.quantity("dressing.delta", D::Frequency, d.delta);
      v.integer("derive.hopping_range", d.options.hopping_range);
      v.integer("derive.interaction_range", d.options.interaction_range);
      v.number("derive.validity_ratio", d.options.validity_ratio);
      v.number("derive.facilitation_ratio", d.options.facilitation_ratio);
      v.choice("derive.validity_policy", d.options.validity_policy, kPolicies);
      v.choice("derive.facilitation_policy", d.options.facilitation_policy, kPolicies);
      break;
    }
    case Experiment::Validate:
      break;
  }
  v.text("output.dir", c.output.dir);
  v.formats("output.formats", c.output);
}

}  // namespace

std::string experiment_name(Experiment e) {
  for (const auto& [name, value] : kExperiments)
    if (value == e) return name;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [n, value] : kExperiments)
    if (n == name) return value;
  throw ParseError("unknown experiment '" + name + "'", 0);
}

double parse_quantity(const std::string& text, Dimension dim, RateConvention rates) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), value);
  if (r.ec != std::errc()) throw ParseError("'" + s + "' is not a number with a unit", 0);
  const std::string unit = trim(std::string(r.ptr, s.data() + s.size()));
  if (unit.empty())
    throw ParseError(std::string("missing unit suffix on ") + dimension_name(dim) + " '" + s +
                         "'",
                     0);
  const double two_pi = angular_mhz(1.0);
  switch (dim) {
    case Dimension::Frequency:
      if (unit == "rad/us") return value;
      if (unit == "MHz") return two_pi * value;
      if (unit == "kHz") return two_pi * 1e-3 * value;
      break;
    case Dimension::Rate: {
      const double scale = rates == RateConvention::Angular ? two_pi : 1.0;
      if (unit == "1/us") return value;
      if (unit == "MHz") return scale * value;
      if (unit == "kHz") return scale * 1e-3 * value;
      break;
    }
    case Dimension::Time:
      if (unit == "us") return value;
      if (unit == "ns") return 1e-3 * value;
      if (unit == "ms") return 1e3 * value;
      break;
    case Dimension::Length:
      if (unit == "um") return value;
      if (unit == "nm") return 1e-3 * value;
      break;
  }
  throw ParseError("unit '" + unit + "' does not fit a " + dimension_name(dim), 0);
}

std::string format_quantity(double value, Dimension dim) {
  switch (dim) {
    case Dimension::Frequency:
      return shortest(value) + " rad/us";
    case Dimension::Rate:
      return shortest(value) + " 1/us";
    case Dimension::Time:
      return shortest(value) + " us";
    default:
      return shortest(value) + " um";
  }
}

RunConfig default_config(Experiment e) {
  RunConfig c;
  c.experiment = e;
  c.output.dir = "out/" + experiment_name(e);
  if (e == Experiment::Bound) c.engines = EngineSet{true, true, true};
  return c;
}

RunConfig parse_config_text(const std::string& text, std::optional<Experiment> expected) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root.IsMap()) throw ParseError("config must be a mapping of keys", line_of(root));
  const YAML::Node id = root["experiment"];
  if (!id.IsDefined()) {
    if (!expected) throw ParseError("missing required key 'experiment'", 1);
  } else if (!id.IsScalar()) {
    throw ParseError("experiment must be a name", line_of(id));
  }
  Experiment e = expected.value_or(Experiment::Transfer);
  if (id.IsDefined()) {
    try {
      e = parse_experiment(id.Scalar());
    } catch (const ParseError& err) {
      throw ParseError(err.what(), line_of(id));
    }
    if (expected && *expected != e)
      throw ParseError("config is for experiment '" + id.Scalar() + "', not '" +
                           experiment_name(*expected) + "'",
                       line_of(id));
  }
  RunConfig cfg = default_config(e);
  cfg.provenance["experiment"] = id.IsDefined() ? "file" : "flag";
  Reader reader(root, cfg);
  schema(reader, cfg);
  reader.finish();
  return cfg;
}

RunConfig parse_config_file(const std::string& path, std::optional<Experiment> expected) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str(), expected);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

std::string emit_config(const RunConfig& cfg) {
  YAML::Node root(YAML::NodeType::Map);
  root["experiment"] = experiment_name(cfg.experiment);
  Writer writer(root);
  RunConfig copy = cfg;
  schema(writer, copy);
  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  if (cfg.seeds.empty()) fail("at least one seed is required");
  if (cfg.threads < 1) fail("threads must be at least 1");
  if (cfg.output.dir.empty()) fail("output.dir must not be empty");
  const EngineSet& en = cfg.engines;
  const bool full_space = en.exact || en.trajectory;
  auto exact_size = [&](int n, const std::string& key) {
    if (full_space && n > kExactMaxSites)
      fail(key + " = " + std::to_string(n) + " exceeds the exact-engine limit of " +
           std::to_string(kExactMaxSites) + " sites; select the effective engine");
  };
  switch (cfg.experiment) {
    case Experiment::Transfer: {
      const auto& t = cfg.transfer;
      if (!en.effective && !en.exact) fail("transfer needs the effective or exact engine");
      if (en.exact) exact_size(t.n_atoms, "chain.sites");
      if (t.ensemble < 1 || t.sweep_ensemble < 1) fail("ensemble sizes must be positive");
      if (en.exact && t.exact_ensemble < 1) fail("transfer.exact_ensemble must be positive");
      if (t.n_outputs < 2) fail("evolution.outputs must be at least 2");
      break;
    }
    case Experiment::Pump: {
      const auto& p = cfg.pump;
      if (en.exact) exact_size(p.n_sites, "chain.sites");
      if (p.n_outputs < 2) fail("evolution.outputs must be at least 2");
      break;
    }
    case Experiment::Bound: {
      const auto& b = cfg.bound;
      if (b.run_dimer && en.exact) exact_size(b.dimer_sites, "dimer.sites");
      if (b.run_high_order) exact_size(b.sites, "high_order.sites");
      if (en.trajectory && b.trajectories < 1) fail("evolution.trajectories must be positive");
      if (b.n_outputs < 2) fail("evolution.outputs must be at least 2");
      break;
    }
    case Experiment::Hrs: {
      const auto& h = cfg.hrs;
      exact_size(h.n_sites, "chain.sites");
      if (full_space && h.trajectories < 1) fail("evolution.trajectories must be positive");
      if (h.n_outputs < 2) fail("evolution.outputs must be at least 2");
      break;
    }
    case Experiment::Chern:
      if (cfg.chern.grids.empty()) fail("chern.grids is empty");
      break;
    case Experiment::Derive:
      if (cfg.derive.n_sites < 2) fail("chain.sites must be at least 2");
      break;
    case Experiment::Validate:
      break;
  }
}

}  // namespace rydex::cli
