// Copyright 2026 The affine-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "affinekit/ode.hpp"

#include "affinekit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace affinekit::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

double scaled_rms(const ComplexVector& e, const ComplexVector& y0, const ComplexVector& y1,
                  const Options& o) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(e[i]) / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(std::max<Eigen::Index>(e.size(), 1)));
}

double initial_step(const Rhs& f, const ComplexVector& y0, const ComplexVector& f0, double span,
                    const Options& o) {
  const double d0 = scaled_rms(y0, y0, y0, o);
  const double d1 = scaled_rms(f0, y0, y0, o);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const ComplexVector y1 = y0 + h0 * f0;
  const ComplexVector f1 = f(y1);
  if (!f1.allFinite()) return h0 * 1e-3;
  const double d2 = scaled_rms(f1 - f0, y0, y0, o) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

ComplexVector Trajectory::interpolate(double t) const {
  if (nodes_.empty() || t < t_begin() || t > t_end())
    throw DomainError("Trajectory::interpolate: time outside the integrated range");
  auto hi = std::lower_bound(nodes_.begin(), nodes_.end(), t,
                             [](const Node& n, double v) { return n.t < v; });
  if (hi->t == t) return hi->y;
  auto lo = std::prev(hi);
  const double h = hi->t - lo->t;
  const double s = (t - lo->t) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * lo->y + (h10 * h) * lo->f + h01 * hi->y + (h11 * h) * hi->f;
}

Outcome integrate(const Rhs& f, const ComplexVector& y0, std::span<const double> stops,
                  const Options& o, const GuardNorm& guard) {
  Outcome out;
  if (stops.empty()) return out;
  for (std::size_t i = 0; i < stops.size(); ++i)
    if (stops[i] < 0.0 || (i > 0 && stops[i] < stops[i - 1]) || !std::isfinite(stops[i]))
      throw DomainError("ode::integrate: stop times must be finite, nonnegative and ascending");

  const double t_final = stops.back();
  const double min_step = o.min_step_fraction * t_final;

  double t = 0.0;
  ComplexVector y = y0;
  ComplexVector k1 = f(y);
  if (o.record_trajectory) out.trajectory.push({t, y, k1});

  std::size_t next = 0;
  while (next < stops.size() && stops[next] == 0.0) {
    out.at_stops.push_back(y);
    ++next;
  }
  if (next == stops.size()) return out;
  if (!y.allFinite() || !k1.allFinite()) {
    out.status = Status::Overflow;
    return out;
  }

  double h = initial_step(f, y, k1, t_final, o);
  bool last_rejected = false;

  while (next < stops.size()) {
    if (out.accepted + out.rejected >= o.max_steps) {
      out.status = Status::MaxSteps;
      out.t_reached = t;
      return out;
    }
    const double target = stops[next];
    bool hits_stop = false;
    double step = h;
    if (t + step >= target || target - (t + step) <= 1e-14 * std::max(1.0, target)) {
      step = target - t;
      hits_stop = true;
    }

    const ComplexVector k2 = f(y + step * (a21 * k1));
    const ComplexVector k3 = f(y + step * (a31 * k1 + a32 * k2));
    const ComplexVector k4 = f(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
    const ComplexVector k5 = f(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const ComplexVector k6 = f(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const ComplexVector y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ComplexVector k7 = f(y_new);
    const ComplexVector err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = scaled_rms(err, y, y_new, o);
    if (!y_new.allFinite() || !k7.allFinite() || !std::isfinite(err_norm)) err_norm = kInfinity;

    if (err_norm <= 1.0) {
      t = hits_stop ? target : t + step;
      y = y_new;
      k1 = k7;
      ++out.accepted;
      out.err_est += err.cwiseAbs().maxCoeff();
      if (o.record_trajectory) out.trajectory.push({t, y, k1});
      if (guard && guard(y) > o.overflow_guard) {
        out.status = Status::Overflow;
        out.t_reached = t;
        return out;
      }
      while (hits_stop && next < stops.size() && stops[next] <= t) {
        out.at_stops.push_back(y);
        ++next;
      }
      double factor = err_norm == 0.0 ? kMaxFactor : kSafety * std::pow(err_norm, -0.2);
      factor = std::clamp(factor, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
      // A clamped final step says nothing about the natural step size.
      if (!hits_stop) h = step * factor;
      last_rejected = false;
      if (!hits_stop && step < min_step) {
        out.status = Status::StepCollapse;
        out.t_reached = t;
        return out;
      }
    } else {
      ++out.rejected;
      const double factor =
          std::isfinite(err_norm) ? std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2)) : kMinFactor;
      h = step * std::min(factor, 1.0);
      last_rejected = true;
      if (h < min_step) {
        out.status = Status::StepCollapse;
        out.t_reached = t;
        return out;
      }
    }
  }
  out.t_reached = t;
  return out;
}

}  // namespace affinekit::ode
