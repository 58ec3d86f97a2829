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

#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rydex/error.hpp"

#ifndef RYDEX_VERSION
#define RYDEX_VERSION "unknown"
#endif

namespace rydex::cli {

namespace fs = std::filesystem;

const char* version_string() { return RYDEX_VERSION; }

std::string fixed17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> column_labels(const ObservableSeries& s) {
  const Eigen::Index r = s.rows();
  const Eigen::Index c = s.cols();
  if (static_cast<Eigen::Index>(s.columns.size()) == r * c) return s.columns;
  std::vector<std::string> out;
  if (r * c == 1) return {"value"};
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      out.push_back(c == 1 ? "v" + std::to_string(i)
                           : "m_" + std::to_string(i) + "_" + std::to_string(j));
  return out;
}

namespace {

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t k = 0; k < seeds.size(); ++k)
    out += (k ? " " : "") + std::to_string(seeds[k]);
  return out;
}

void header(std::ostringstream& out, const ObservableSeries& s, const TableMeta& meta) {
  out << "# rydex " << version_string() << "\n";
  out << "# experiment: " << meta.experiment << "\n";
  out << "# series: " << s.name << "\n";
  if (!s.note.empty()) out << "# note: " << s.note << "\n";
  out << "# abscissa unit: us unless the note says otherwise\n";
  out << "# frequencies rad/us, rates 1/us, lengths um\n";
  out << "# record shape: " << s.rows() << "x" << s.cols() << ", row-major\n";
  out << "# seed: " << meta.seed << "\n";
  if (meta.realizations > 0) {
    out << "# realizations: " << meta.realizations << "\n";
    out << "# spread: " << meta.spread_kind << "\n";
    out << "# member seeds: " << join_seeds(meta.member_seeds) << "\n";
  }
}

void row(std::ostringstream& out, double t, const std::vector<const Eigen::MatrixXd*>& blocks) {
  out << fixed17(t);
  for (const auto* m : blocks)
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j) out << "," << fixed17((*m)(i, j));
  out << "\n";
}

}  // namespace

std::string series_csv(const ObservableSeries& s, const TableMeta& meta) {
  std::ostringstream out;
  header(out, s, meta);
  out << "t";
  for (const auto& c : column_labels(s)) out << "," << c;
  out << "\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) row(out, s.times[k], {&s.values[k]});
  return out.str();
}

std::string ensemble_csv(const EnsembleSeries& e, const TableMeta& meta) {
  TableMeta m = meta;
  m.realizations = e.realizations;
  m.spread_kind = e.spread_kind;
  m.member_seeds = e.seeds;
  std::ostringstream out;
  header(out, e.mean, m);
  out << "t";
  const auto labels = column_labels(e.mean);
  for (const auto& c : labels) out << "," << c;
  for (const auto& c : labels) out << "," << c << "_" << e.spread_kind;
  out << "\n";
  for (std::size_t k = 0; k < e.mean.times.size(); ++k)
    row(out, e.mean.times[k], {&e.mean.values[k], &e.spread.values[k]});
  return out.str();
}

nlohmann::json report_json(const ExperimentReport& rep, const RunConfig& cfg,
                           std::uint64_t seed) {
  using nlohmann::json;
  json j;
  j["experiment"] = rep.id;
  j["version"] = version_string();
  j["seed"] = seed;
  j["passed"] = rep.passed();
  j["parameters"] = json::array();
  for (const auto& p : rep.parameters)
    j["parameters"].push_back({{"name", p.name}, {"value", p.value}, {"unit", p.unit}});
  j["notes"] = rep.notes;
  j["checks"] = json::array();
  for (const auto& c : rep.checks)
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"relation", c.relation},
                           {"detail", c.detail}});
  j["series"] = json::array();
  for (const auto& s : rep.series)
    j["series"].push_back({{"name", s.name},
                           {"file", s.name + ".csv"},
                           {"note", s.note},
                           {"samples", s.times.size()},
                           {"shape", {s.rows(), s.cols()}}});
  j["ensembles"] = json::array();
  for (const auto& e : rep.ensembles)
    j["ensembles"].push_back({{"name", e.mean.name},
                              {"file", e.mean.name + ".csv"},
                              {"realizations", e.realizations},
                              {"spread", e.spread_kind},
                              {"seeds", e.seeds}});
  j["config"] = emit_config(cfg);
  j["provenance"] = cfg.provenance;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec)
    throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<fs::path> write_report(const ExperimentReport& rep, const RunConfig& cfg,
                                   std::uint64_t seed, const fs::path& dir) {
  std::vector<fs::path> written;
  TableMeta meta;
  meta.experiment = rep.id;
  meta.seed = seed;
  if (cfg.output.csv) {
    for (const auto& s : rep.series) {
      written.push_back(dir / (s.name + ".csv"));
      write_text(written.back(), series_csv(s, meta));
    }
    for (const auto& e : rep.ensembles) {
      written.push_back(dir / (e.mean.name + ".csv"));
      write_text(written.back(), ensemble_csv(e, meta));
    }
  }
  if (cfg.output.json) {
    written.push_back(dir / "report.json");
    write_text(written.back(), report_json(rep, cfg, seed).dump(2) + "\n");
  }
  return written;
}

}  // namespace rydex::cli
