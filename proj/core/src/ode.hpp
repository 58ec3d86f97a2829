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

// Dormand-Prince 5(4) with an embedded error estimate, generic over Eigen
// dense vectors and matrices.

#ifndef RYDEX_SRC_ODE_HPP
#define RYDEX_SRC_ODE_HPP

#include <algorithm>
#include <cmath>

#include "rydex/error.hpp"

namespace rydex::detail {

struct OdeTolerance {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  // 0 picks a step from the derivative norm
  long max_steps = 50'000'000;
  /// Bounds the local error by tol * h so that the global error grows at
  /// most like tol per unit time.
  bool per_unit_time = false;
};

/// Integrates y' = f(t, y) from t0 to t1 in place. `h_hint` carries the last
/// accepted step across calls so that consecutive output intervals do not
/// restart from a cold guess.
template <typename State, typename Rhs>
void dopri45(Rhs&& f, double t0, double t1, State& y, const OdeTolerance& tol,
             double& h_hint) {
  if (t1 <= t0) return;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  State k1 = f(t0, y);
  double t = t0;
  double h = h_hint;
  if (!(h > 0.0)) {
    const double scale = tol.abs_tol + tol.rel_tol * y.cwiseAbs().maxCoeff();
    const double d = k1.cwiseAbs().maxCoeff();
    h = d > 0.0 ? 0.01 * scale / d : (t1 - t0);
    h = std::max(h, 1e-6 * (t1 - t0));
  }
  const double h_min = 1e-14 * std::max(1.0, std::abs(t1));
  long steps = 0;
  while (t < t1) {
    if (++steps > tol.max_steps)
      throw StiffnessError("adaptive integrator exceeded its step budget");
    const bool last = t + h >= t1;
    const double hs = last ? t1 - t : h;
    State k2 = f(t + c2 * hs, y + hs * (a21 * k1));
    State k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    State k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    State k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    State k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    State y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = f(t + hs, y_new);
    State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const auto sc = (tol.abs_tol +
                     tol.rel_tol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array())
                        .eval();
    const double unit = tol.per_unit_time ? hs : 1.0;
    const double ratio = (err.cwiseAbs().array() / sc).maxCoeff() / unit;
    const double order = tol.per_unit_time ? 0.25 : 0.2;
    if (ratio <= 1.0) {
      t = last ? t1 : t + hs;
      y = std::move(y_new);
      k1 = std::move(k7);
      const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -order));
      // A final step clipped to t1 says little about the natural step size.
      h_hint = (last && hs < h) ? h : hs * grow;
      h = hs * grow;
    } else {
      h = hs * std::max(0.2, 0.9 * std::pow(ratio, -0.25));
      if (h < h_min) throw StiffnessError("adaptive step size underflow");
    }
  }
}

}  // namespace rydex::detail

#endif  // RYDEX_SRC_ODE_HPP
