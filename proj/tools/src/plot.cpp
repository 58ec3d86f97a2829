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

#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rydex::cli {

namespace {

constexpr double kWidth = 680.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

const std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step)
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

class Frame {
 public:
  Frame(const Axes& axes, Range x, Range y, double width = kWidth) : axes_(axes), width_(width) {
    x.finish();
    y.finish();
    const double pad = 0.05 * (y.hi - y.lo);
    x_ = x;
    y_ = {y.lo - pad, y.hi + pad};
  }

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (width_ - kLeft - kRight);
  }
  double py(double y) const {
    return kTop + (y_.hi - y) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  void open(std::ostringstream& out) const {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\""
        << num(kHeight) << "\" viewBox=\"0 0 " << num(width_) << " " << num(kHeight)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(0.5 * (width_ - kRight + kLeft)) << "\" y=\"22\" "
        << "text-anchor=\"middle\" font-size=\"14\">" << escape(axes_.title) << "</text>\n";
  }

  void axes(std::ostringstream& out) const {
    const double x0 = kLeft;
    const double x1 = width_ - kRight;
    const double y0 = kTop;
    const double y1 = kHeight - kBottom;
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
        << "\" height=\"" << num(y1 - y0) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const double t : ticks(x_.lo, x_.hi)) {
      out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(px(t))
          << "\" y2=\"" << num(y1 + 5) << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(y1 + 18)
          << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (const double t : ticks(y_.lo, y_.hi)) {
      out << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(x0)
          << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py(t) + 4)
          << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    out << "<text x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"" << num(kHeight - 14)
        << "\" text-anchor=\"middle\">" << escape(axes_.xlabel) << "</text>\n";
    out << "<text transform=\"translate(18," << num(0.5 * (y0 + y1))
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes_.ylabel) << "</text>\n";
  }

  void legend(std::ostringstream& out, const std::vector<Curve>& curves, int offset = 0) const {
    for (std::size_t k = 0; k < curves.size(); ++k) {
      if (curves[k].label.empty()) continue;
      const double y = kTop + 12 + 18.0 * static_cast<double>(k + offset);
      const double x = width_ - kRight + 12;
      out << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 22)
          << "\" y2=\"" << num(y) << "\" stroke=\"" << kPalette[(k + offset) % kPalette.size()]
          << "\" stroke-width=\"2\"" << (curves[k].dashed ? " stroke-dasharray=\"5,3\"" : "")
          << "/>\n";
      out << "<text x=\"" << num(x + 28) << "\" y=\"" << num(y + 4) << "\">"
          << escape(curves[k].label) << "</text>\n";
    }
  }

  void curve(std::ostringstream& out, const Curve& c, const char* color) const {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\""
        << (c.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t k = 0; k < c.x.size(); ++k)
      if (std::isfinite(c.y[k])) out << num(px(c.x[k])) << "," << num(py(c.y[k])) << " ";
    out << "\"/>\n";
    for (std::size_t k = 0; k < c.err.size() && k < c.x.size(); ++k) {
      out << "<line x1=\"" << num(px(c.x[k])) << "\" y1=\"" << num(py(c.y[k] - c.err[k]))
          << "\" x2=\"" << num(px(c.x[k])) << "\" y2=\"" << num(py(c.y[k] + c.err[k]))
          << "\" stroke=\"" << color << "\"/>\n";
    }
    if (c.markers)
      for (std::size_t k = 0; k < c.x.size(); ++k)
        out << "<circle cx=\"" << num(px(c.x[k])) << "\" cy=\"" << num(py(c.y[k]))
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
  }

 private:
  Axes axes_;
  double width_;
  Range x_;
  Range y_;
};

Range x_range(const std::vector<Curve>& curves) {
  Range r;
  for (const auto& c : curves)
    for (const double v : c.x) r.add(v);
  return r;
}

Range y_range(const std::vector<Curve>& curves) {
  Range r;
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.y.size(); ++k) {
      const double e = k < c.err.size() ? c.err[k] : 0.0;
      r.add(c.y[k] - e);
      r.add(c.y[k] + e);
    }
  return r;
}

/// Sequential blue-to-yellow color map on [0, 1].
std::string color_map(double v) {
  static const std::array<std::array<double, 3>, 5> anchors{{{68, 1, 84},
                                                             {59, 82, 139},
                                                             {33, 145, 140},
                                                             {94, 201, 98},
                                                             {253, 231, 37}}};
  v = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
  const double s = v * (anchors.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), anchors.size() - 2);
  const double f = s - static_cast<double>(i);
  char buf[16];
  auto channel = [&](int c) {
    return static_cast<int>(std::lround(anchors[i][c] + f * (anchors[i + 1][c] - anchors[i][c])));
  };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(0), channel(1), channel(2));
  return buf;
}

// ------------------------------------------------------- report accessors

const ObservableSeries* series(const ExperimentReport& rep, const std::string& name) {
  return rep.find_series(name);
}

int column_index(const ObservableSeries& s, const std::string& label) {
  for (std::size_t k = 0; k < s.columns.size(); ++k)
    if (s.columns[k] == label) return static_cast<int>(k);
  return -1;
}

/// Entry `index` of the flattened (column-major storage) record.
double entry(const Eigen::MatrixXd& m, int index) {
  if (m.cols() == 1) return m(index, 0);
  return m(index / m.cols(), index % m.cols());
}

Curve column_curve(const ObservableSeries& s, const std::string& col, const std::string& label,
                   const ObservableSeries* spread = nullptr) {
  Curve c;
  c.label = label;
  const int i = column_index(s, col);
  if (i < 0) return c;
  c.x = s.times;
  for (const auto& v : s.values) c.y.push_back(entry(v, i));
  if (spread)
    for (const auto& v : spread->values) c.err.push_back(entry(v, i));
  return c;
}

std::vector<Curve> non_empty(std::vector<Curve> in) {
  std::vector<Curve> out;
  for (auto& c : in)
    if (!c.x.empty()) out.push_back(std::move(c));
  return out;
}

void add(std::vector<std::pair<std::string, std::string>>& out, const std::string& name,
         const Axes& axes, std::vector<Curve> curves) {
  curves = non_empty(std::move(curves));
  if (!curves.empty()) out.emplace_back(name, line_chart(axes, curves));
}

HeatPanel time_site_map(const ObservableSeries& s, const std::string& title) {
  HeatPanel p;
  p.title = title;
  const auto n = static_cast<Eigen::Index>(s.values.front().size());
  p.z.resize(static_cast<Eigen::Index>(s.times.size()), n);
  for (std::size_t k = 0; k < s.times.size(); ++k)
    p.z.row(static_cast<Eigen::Index>(k)) = s.values[k].reshaped().transpose();
  p.x0 = -0.5;
  p.x1 = static_cast<double>(n) - 0.5;
  p.y0 = s.times.front();
  p.y1 = s.times.back();
  return p;
}

}  // namespace

std::string line_chart(const Axes& axes, const std::vector<Curve>& curves) {
  const Frame f(axes, x_range(curves), y_range(curves));
  std::ostringstream out;
  f.open(out);
  for (std::size_t k = 0; k < curves.size(); ++k)
    f.curve(out, curves[k], kPalette[k % kPalette.size()]);
  f.axes(out);
  f.legend(out, curves);
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart(const Axes& axes, const std::vector<double>& x,
                      const std::vector<double>& heights, const std::vector<Curve>& overlay) {
  Range xr;
  Range yr;
  yr.add(0.0);
  double width = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    xr.add(x[k]);
    yr.add(heights[k]);
    if (k > 0) width = std::min(width, std::abs(x[k] - x[k - 1]));
  }
  xr.lo -= width;
  xr.hi += width;
  const Range oy = y_range(overlay);
  yr.add(oy.lo);
  yr.add(oy.hi);
  const Frame f(axes, xr, yr);
  std::ostringstream out;
  f.open(out);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = f.px(x[k] - 0.4 * width);
    const double b = f.px(x[k] + 0.4 * width);
    const double top = f.py(std::max(heights[k], 0.0));
    const double base = f.py(0.0);
    out << "<rect x=\"" << num(a) << "\" y=\"" << num(top) << "\" width=\"" << num(b - a)
        << "\" height=\"" << num(base - top) << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  for (std::size_t k = 0; k < overlay.size(); ++k)
    f.curve(out, overlay[k], kPalette[(k + 1) % kPalette.size()]);
  f.axes(out);
  f.legend(out, overlay, 1);
  out << "</svg>\n";
  return out.str();
}

std::string heatmaps(const Axes& axes, const std::vector<HeatPanel>& panels) {
  const double panel_w = 220.0;
  const double gap = 30.0;
  const double width = kLeft + panels.size() * (panel_w + gap) + 80.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : panels) {
    lo = std::min(lo, p.z.minCoeff());
    hi = std::max(hi, p.z.maxCoeff());
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(width) << " " << num(kHeight)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(0.5 * width) << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(axes.title) << "</text>\n";
  const double top = kTop + 14;
  const double h = kHeight - top - kBottom;
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    const double x0 = kLeft + k * (panel_w + gap);
    const double cw = panel_w / static_cast<double>(p.z.cols());
    const double ch = h / static_cast<double>(p.z.rows());
    out << "<text x=\"" << num(x0 + 0.5 * panel_w) << "\" y=\"" << num(top - 6)
        << "\" text-anchor=\"middle\">" << escape(p.title) << "</text>\n";
    for (Eigen::Index r = 0; r < p.z.rows(); ++r)
      for (Eigen::Index c = 0; c < p.z.cols(); ++c) {
        // Row 0 at the bottom.
        const double y = top + h - (r + 1) * ch;
        out << "<rect x=\"" << num(x0 + c * cw) << "\" y=\"" << num(y) << "\" width=\""
            << num(cw + 0.3) << "\" height=\"" << num(ch + 0.3) << "\" fill=\""
            << color_map((p.z(r, c) - lo) / (hi - lo)) << "\"/>\n";
      }
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(top) << "\" width=\"" << num(panel_w)
        << "\" height=\"" << num(h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x0) << "\" y=\"" << num(top + h + 16) << "\">" << num(p.x0)
        << "</text>\n";
    out << "<text x=\"" << num(x0 + panel_w) << "\" y=\"" << num(top + h + 16)
        << "\" text-anchor=\"end\">" << num(p.x1) << "</text>\n";
    if (k == 0) {
      out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(top + h)
          << "\" text-anchor=\"end\">" << num(p.y0) << "</text>\n";
      out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(top + 10)
          << "\" text-anchor=\"end\">" << num(p.y1) << "</text>\n";
    }
  }
  out << "<text x=\"" << num(kLeft + 0.5 * panels.size() * (panel_w + gap)) << "\" y=\""
      << num(kHeight - 14) << "\" text-anchor=\"middle\">" << escape(axes.xlabel) << "</text>\n";
  out << "<text transform=\"translate(18," << num(top + 0.5 * h)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes.ylabel) << "</text>\n";
  // Color bar.
  const double bx = width - 50.0;
  for (int k = 0; k < 50; ++k) {
    const double y = top + h - (k + 1) * h / 50.0;
    out << "<rect x=\"" << num(bx) << "\" y=\"" << num(y) << "\" width=\"14\" height=\""
        << num(h / 50.0 + 0.3) << "\" fill=\"" << color_map((k + 0.5) / 50.0) << "\"/>\n";
  }
  out << "<text x=\"" << num(bx + 7) << "\" y=\"" << num(top + h + 16)
      << "\" text-anchor=\"middle\">" << num(lo) << "</text>\n";
  out << "<text x=\"" << num(bx + 7) << "\" y=\"" << num(top - 6)
      << "\" text-anchor=\"middle\">" << num(hi) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> render_report(
    const ExperimentReport& rep, const std::vector<double>& map_times) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& id = rep.id;

  if (id == "transfer") {
    std::vector<Curve> curves;
    if (const auto* s = series(rep, "transfer_effective")) {
      curves.push_back(column_curve(*s, "fidelity", "F effective"));
      curves.push_back(column_curve(*s, "c0n", "C(0,N) effective"));
    }
    if (const auto* s = series(rep, "transfer_exact")) {
      curves.push_back(column_curve(*s, "fidelity", "F exact"));
      curves.back().dashed = true;
      curves.push_back(column_curve(*s, "c0n", "C(0,N) exact"));
      curves.back().dashed = true;
    }
    add(out, "transfer.svg", {"Entanglement transfer", "t (us)", "fidelity, concurrence"},
        curves);
    std::vector<Curve> dis;
    for (const char* name : {"transfer_effective_disorder", "transfer_exact_disorder"}) {
      if (const auto* e = rep.find_ensemble(name))
        dis.push_back(column_curve(e->mean, "fidelity", name, &e->spread));
    }
    add(out, "transfer_disorder.svg",
        {"Fidelity under positional disorder (mean, std)", "t (us)", "fidelity"}, dis);
    if (const auto* e = rep.find_ensemble("sigma_sweep")) {
      Curve c = column_curve(e->mean, "fidelity_at_t_star", "F(t*)", &e->spread);
      c.markers = true;
      add(out, "sigma_sweep.svg", {"Fidelity at t* against sigma", "sigma (um)", "fidelity"},
          {c});
    }
  } else if (id == "pump") {
    std::vector<Curve> curves;
    for (const char* engine : {"nn", "nnn", "exact"})
      if (const auto* s = series(rep, std::string("displacement_") + engine))
        curves.push_back(column_curve(*s, "x_mean", engine));
    add(out, "pump.svg", {"Pumped displacement", "t (us)", "<x>/l"}, curves);
    std::vector<HeatPanel> panels;
    for (const char* engine : {"nn", "nnn", "exact"})
      if (const auto* s = series(rep, std::string("density_") + engine))
        if (!s->times.empty()) panels.push_back(time_site_map(*s, engine));
    if (!panels.empty())
      out.emplace_back("density.svg",
                       heatmaps({"Exciton density <n_i>(t)", "site", "t (us)"}, panels));
  } else if (id == "bound") {
    for (const auto& s : rep.series) {
      if (s.name.rfind("g2_", 0) == 0 && !s.times.empty()) {
        std::vector<HeatPanel> panels;
        const bool dimer = s.name.find("dimer") != std::string::npos;
        std::vector<double> want = map_times;
        if (dimer || want.empty())
          want = {s.times.front(), s.times[s.times.size() / 2], s.times.back()};
        for (const double t : want) {
          std::size_t best = 0;
          for (std::size_t k = 0; k < s.times.size(); ++k)
            if (std::abs(s.times[k] - t) < std::abs(s.times[best] - t)) best = k;
          HeatPanel p;
          p.title = "t = " + num(s.times[best]) + " us";
          const Eigen::MatrixXd& g = s.values[best];
          const double m = g.maxCoeff();
          p.z = m > 0.0 ? Eigen::MatrixXd(g / m) : g;
          p.x0 = -0.5;
          p.x1 = static_cast<double>(g.cols()) - 0.5;
          p.y0 = -0.5;
          p.y1 = static_cast<double>(g.rows()) - 0.5;
          panels.push_back(std::move(p));
        }
        out.emplace_back(s.name + ".svg",
                         heatmaps({"g2 normalized to its maximum, " + s.name.substr(3), "j", "i"},
                                  panels));
      } else if (s.name.rfind("com_", 0) == 0 && !s.values.empty()) {
        const Eigen::MatrixXd& t = s.values.back();
        std::vector<double> x;
        std::vector<double> p;
        Curve bessel{"Bessel fit", {}, {}, {}, false, false};
        Curve gauss{"Gaussian fit", {}, {}, {}, true, false};
        for (Eigen::Index k = 0; k < t.rows(); ++k) {
          x.push_back(t(k, 0));
          p.push_back(t(k, 1));
          bessel.x.push_back(t(k, 0));
          bessel.y.push_back(t(k, 2));
          gauss.x.push_back(t(k, 0));
          gauss.y.push_back(t(k, 3));
        }
        out.emplace_back(s.name + ".svg",
                         bar_chart({"Center-of-mass distribution, " + s.name.substr(4),
                                    "(i + j)/2", "probability"},
                                   x, p, {bessel, gauss}));
      } else if (s.name.rfind("diagonal_weights_", 0) == 0 && !s.values.empty()) {
        std::vector<Curve> curves;
        for (int d = 1; d <= 3 && d < s.values.front().size(); ++d) {
          Curve c;
          c.label = "|i-j| = " + std::to_string(d);
          c.x = s.times;
          for (const auto& v : s.values) c.y.push_back(v(d, 0));
          curves.push_back(std::move(c));
        }
        add(out, s.name + ".svg",
            {"g2 weight per diagonal, " + s.name.substr(17), "t (us)", "fraction"}, curves);
      }
    }
  } else if (id == "hrs") {
    std::vector<Curve> curves;
    for (const auto& s : rep.series) {
      if (s.name.rfind("msd_hrs_gamma_", 0) != 0) continue;
      const std::string tag = s.name.substr(14);
      curves.push_back(column_curve(s, "closed_form", "closed form, gamma " + tag));
      curves.push_back(column_curve(s, "hrs", "chain, gamma " + tag));
      curves.back().dashed = true;
    }
    for (const auto& e : rep.ensembles) {
      if (e.mean.name.rfind("msd_exact_gamma_", 0) != 0) continue;
      Curve c = column_curve(e.mean, "msd", "exact, gamma " + e.mean.name.substr(16), &e.spread);
      c.markers = true;
      curves.push_back(std::move(c));
    }
    add(out, "msd.svg", {"Mean squared displacement", "t (us)", "<x^2> (sites^2)"}, curves);
  }
  return out;
}

}  // namespace rydex::cli
