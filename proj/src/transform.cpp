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

#include "affinekit/transform.hpp"

#include "affinekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affinekit {

std::string to_string(TransformStatus status) {
  switch (status) {
    case TransformStatus::Ok: return "ok";
    case TransformStatus::BlowUp: return "blow_up";
    case TransformStatus::DomainExit: return "domain_exit";
  }
  return "unknown";
}

namespace {

ode::Rhs riccati_rhs(const AffineParams& p) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  return [&p, d](const ComplexVector& y) {
    const ComplexVector psi = y.tail(d);
    ComplexVector dy(d + 1);
    dy[0] = p.F(psi);
    dy.tail(d) = p.R(psi);
    return dy;
  };
}

ode::Options ode_options(const TransformOptions& o) {
  ode::Options opt;
  opt.atol = o.tol;
  opt.rtol = o.tol;
  opt.max_steps = o.max_steps;
  opt.overflow_guard = o.overflow_guard;
  return opt;
}

/// Membership of psi in U with real parts below `slack` treated as zero.
bool in_domain_within(const StateSpace& space, const ComplexVector& psi, double slack) {
  ComplexVector v = psi;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i].real()) <= slack) v[i] = Complex(0.0, v[i].imag());
  return space.in_domain(v);
}

void check_inputs(const AffineParams& p, const ComplexVector& u, const TransformOptions& o) {
  if (static_cast<std::size_t>(u.size()) != p.dim())
    throw DimensionError("evaluate", p.dim(), static_cast<std::size_t>(u.size()));
  if (!(o.tol > 0.0)) throw DomainError("evaluate: tol must be positive");
  if (!u.allFinite()) throw DomainError("evaluate: u is not finite");
  if (o.enforce_domain && !p.space().in_domain(u))
    throw DomainError("u is not in U: support() = inf on " + p.space().describe());
}

}  // namespace

std::vector<TransformResult> evaluate_grid(const AffineParams& p, std::span<const double> times,
                                           const ComplexVector& u, const TransformOptions& options) {
  check_inputs(p, u, options);
  const auto d = static_cast<Eigen::Index>(p.dim());

  ComplexVector y0(d + 1);
  y0[0] = 0.0;
  y0.tail(d) = u;

  const auto guard = [d](const ComplexVector& y) { return y.tail(d).cwiseAbs().maxCoeff(); };
  const ode::Outcome out = ode::integrate(riccati_rhs(p), y0, times, ode_options(options), guard);

  const bool start_in_domain = p.space().in_domain(u);
  std::vector<TransformResult> results;
  results.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    TransformResult r;
    r.t = times[k];
    r.u = u;
    r.steps = out.accepted;
    r.err_est = out.err_est;
    if (k < out.at_stops.size()) {
      const ComplexVector& y = out.at_stops[k];
      r.phi = y[0];
      r.psi = y.tail(d);
      const double slack = 1e3 * options.tol * (1.0 + r.psi.cwiseAbs().maxCoeff());
      if (start_in_domain && !in_domain_within(p.space(), r.psi, slack))
        r.status = TransformStatus::DomainExit;
    } else {
      r.status = TransformStatus::BlowUp;
      r.blow_up_time = out.t_reached;
      r.phi = Complex(std::nan(""), std::nan(""));
      r.psi = ComplexVector::Constant(d, r.phi);
    }
    results.push_back(std::move(r));
  }
  return results;
}

TransformResult evaluate(const AffineParams& p, double t, const ComplexVector& u,
                         const TransformOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evaluate: t must be finite and >= 0");
  const double times[] = {t};
  return evaluate_grid(p, times, u, options).front();
}

TransformResult evaluate(const AffineParams& p, double t, const ComplexVector& u, double tol) {
  TransformOptions o;
  o.tol = tol;
  return evaluate(p, t, u, o);
}

ode::Trajectory riccati_trajectory(const AffineParams& p, double t, const ComplexVector& u,
                                   const TransformOptions& options) {
  check_inputs(p, u, options);
  const auto d = static_cast<Eigen::Index>(p.dim());
  ComplexVector y0(d + 1);
  y0[0] = 0.0;
  y0.tail(d) = u;
  auto opt = ode_options(options);
  opt.record_trajectory = true;
  const double times[] = {t};
  const auto guard = [d](const ComplexVector& y) { return y.tail(d).cwiseAbs().maxCoeff(); };
  ode::Outcome out = ode::integrate(riccati_rhs(p), y0, times, opt, guard);
  if (out.status != ode::Status::Ok) throw BlowUpError("riccati_trajectory", out.t_reached);
  return std::move(out.trajectory);
}

Complex char_fn(const AffineParams& p, const RealVector& x, double t, const ComplexVector& u,
                double tol) {
  if (!p.space().contains(x)) throw DomainError("char_fn: x is not in D");
  const TransformResult r = evaluate(p, t, u, tol);
  if (r.status == TransformStatus::BlowUp) throw BlowUpError("char_fn: (t, u) is not in Q", r.blow_up_time);
  if (r.status == TransformStatus::DomainExit) throw DomainError("char_fn: psi(t, u) left U");
  return std::exp(r.phi + pairing(r.psi, x));
}

// ---------------------------------------------------------------------------
// parabola oracle

PhiPsi closed_form_parabola(double t, const ComplexVector& u) {
  if (u.size() != 2) throw DimensionError("closed_form_parabola", 2, static_cast<std::size_t>(u.size()));
  if (!(t >= 0.0)) throw DomainError("closed_form_parabola: t must be >= 0");
  const Complex u1 = u[0];
  const Complex u2 = u[1];
  if (u2.imag() == 0.0 && u2.real() > 0.0 && t >= 1.0 / (2.0 * u2.real()))
    throw BlowUpError("closed_form_parabola: pole of 1 - 2 t u2", 1.0 / (2.0 * u2.real()));

  const auto z = [&](double s) { return 1.0 - 2.0 * s * u2; };
  const Complex zt = z(t);
  if (zt == 0.0) throw BlowUpError("closed_form_parabola: pole of 1 - 2 t u2", t);

  // Continue Log(z(s)) from s = 0 in increments whose argument change stays
  // below pi/2, so each principal-branch increment is the continuous one.
  Complex log_z = 0.0;
  for (std::size_t n = 8;; n *= 2) {
    Complex acc = 0.0;
    bool fine = true;
    Complex prev = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const Complex cur = z(t * static_cast<double>(k) / static_cast<double>(n));
      const Complex inc = std::log(cur / prev);
      if (std::abs(inc.imag()) >= std::numbers::pi / 2) {
        fine = false;
        break;
      }
      acc += inc;
      prev = cur;
    }
    if (fine || n > (1u << 20)) {
      log_z = acc;
      break;
    }
  }

  PhiPsi out;
  out.phi = -0.5 * log_z + u1 * u1 * t / (2.0 * zt);
  out.psi = u / zt;
  return out;
}

std::pair<Complex, ComplexVector> parabola_FR(const ComplexVector& u) {
  if (u.size() != 2) throw DimensionError("parabola_FR", 2, static_cast<std::size_t>(u.size()));
  ComplexVector r(2);
  r << 2.0 * u[0] * u[1], 2.0 * u[1] * u[1];
  return {u[1] + 0.5 * u[0] * u[0], r};
}

// ---------------------------------------------------------------------------
// verifiers

double semiflow_residual(const AffineParams& p, double t, double s, const ComplexVector& u, double tol) {
  TransformOptions o;
  o.tol = tol;
  const TransformResult whole = evaluate(p, t + s, u, o);
  const TransformResult first = evaluate(p, t, u, o);
  if (!whole.ok()) throw BlowUpError("semiflow_residual: (t + s, u) not in Q", whole.blow_up_time);
  if (!first.ok()) throw BlowUpError("semiflow_residual: (t, u) not in Q", first.blow_up_time);
  // psi(t, u) may sit on the boundary of U up to round-off.
  o.enforce_domain = false;
  const TransformResult second = evaluate(p, s, first.psi, o);
  if (!second.ok()) throw BlowUpError("semiflow_residual: (s, psi(t, u)) not in Q", second.blow_up_time);
  const double phi_res = std::abs(whole.phi - first.phi - second.phi);
  const double psi_res = (whole.psi - second.psi).norm();
  return std::max(phi_res, psi_res);
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

void require_decreasing(std::span<const double> v, std::size_t min_size, const char* what) {
  if (v.size() < min_size)
    throw DomainError(std::string(what) + ": needs at least " + std::to_string(min_size) + " entries");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0) || (i > 0 && !(v[i] < v[i - 1])))
      throw DomainError(std::string(what) + ": entries must be positive and strictly decreasing");
}

}  // namespace

FdRegularity fd_regularity(const AffineParams& p, const ComplexVector& u, std::span<const double> h_list,
                           double tol, std::optional<std::pair<Complex, ComplexVector>> reference) {
  require_decreasing(h_list, 3, "fd_regularity");
  FdRegularity out;
  if (reference) {
    out.F_ref = reference->first;
    out.R_ref = reference->second;
  } else {
    out.F_ref = p.F(u);
    out.R_ref = p.R(u);
  }
  const double scale = std::max(1.0, std::abs(out.F_ref) + out.R_ref.norm());
  const auto rel_error = [&](Complex F, const ComplexVector& R) {
    return (std::abs(F - out.F_ref) + (R - out.R_ref).norm()) / scale;
  };

  for (double h : h_list) {
    const TransformResult r = evaluate(p, h, u, tol);
    if (!r.ok()) throw BlowUpError("fd_regularity: blow-up before h = " + std::to_string(h), r.blow_up_time);
    FdRow row{h, r.phi / h, r.rho() / h, 0.0};
    row.error = rel_error(row.F_est, row.R_est);
    out.rows.push_back(std::move(row));
  }

  const FdRow& a = out.rows[out.rows.size() - 2];
  const FdRow& b = out.rows.back();
  const double ratio = a.h / b.h;
  out.F_richardson = (ratio * b.F_est - a.F_est) / (ratio - 1.0);
  out.R_richardson = (ratio * b.R_est - a.R_est) / (ratio - 1.0);
  out.richardson_error = rel_error(out.F_richardson, out.R_richardson);

  std::vector<double> lh, le;
  for (const auto& row : out.rows) {
    if (row.error > 1e-13) {
      lh.push_back(std::log(row.h));
      le.push_back(std::log(row.error));
    }
  }
  out.observed_order = lh.size() < 2 ? kInfinity : ls_slope(lh, le);
  return out;
}

BoundednessTable boundedness_probe(const AffineParams& p, std::span<const ComplexVector> grid,
                                   std::span<const double> t_list, double tol, std::optional<double> level) {
  require_decreasing(t_list, 1, "boundedness_probe");
  if (level)
    for (const auto& u : grid)
      if (p.space().support(u) > *level)
        throw DomainError("boundedness_probe: grid point outside U_" + std::to_string(*level));

  BoundednessTable table;
  for (double t : t_list) {
    double sup = 0.0;
    for (const auto& u : grid) {
      const TransformResult r = evaluate(p, t, u, tol);
      if (!r.ok()) throw BlowUpError("boundedness_probe", r.blow_up_time);
      sup = std::max(sup, std::abs(r.phi) / t + r.rho().norm() / t);
    }
    table.t.push_back(t);
    table.sup.push_back(sup);
  }
  const std::size_t n = table.sup.size();
  if (n >= 3) table.divergence_suspected = table.sup[n - 1] > 2.0 * table.sup[n - 3];
  const std::size_t k = std::min<std::size_t>(3, n);
  const auto [lo, hi] = std::minmax_element(table.sup.end() - static_cast<std::ptrdiff_t>(k), table.sup.end());
  table.late_variation = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  return table;
}

CpLimitTable cp_limit_check(const AffineParams& p, const RealVector& x, const ComplexVector& u,
                            std::span<const double> t_list, double tol) {
  require_decreasing(t_list, 2, "cp_limit_check");
  if (!p.space().contains(x)) throw DomainError("cp_limit_check: x is not in D");
  const auto d = static_cast<Eigen::Index>(p.dim());

  CpLimitTable table;
  table.target = p.F(u) + p.data().c + pairing(p.R(u) + p.data().gamma.cast<Complex>(), x);

  const ComplexVector zero = ComplexVector::Zero(d);
  for (double t : t_list) {
    const TransformResult ru = evaluate(p, t, u, tol);
    const TransformResult r0 = evaluate(p, t, zero, tol);
    if (!ru.ok()) throw BlowUpError("cp_limit_check", ru.blow_up_time);
    if (!r0.ok()) throw BlowUpError("cp_limit_check", r0.blow_up_time);
    // exp(-<x,u>) * char_fn(x,t,u), with the exponents combined first
    const Complex shifted = std::exp(ru.phi + pairing(ru.rho(), x));
    const Complex alive = std::exp(r0.phi + pairing(r0.psi, x));
    const Complex D = (shifted - alive) / t;
    table.rows.push_back({t, D, std::abs(D - table.target)});
  }

  std::vector<double> lt, le;
  double max_err = 0.0;
  for (const auto& row : table.rows) {
    table.fitted_C = std::max(table.fitted_C, row.error / row.t);
    max_err = std::max(max_err, row.error);
    if (row.error > 0.0) {
      lt.push_back(std::log(row.t));
      le.push_back(std::log(row.error));
    }
  }
  table.exact = max_err <= 1e-12 * std::max(1.0, std::abs(table.target));
  if (!table.exact && lt.size() >= 2) {
    table.log_slope = ls_slope(lt, le);
    table.log_correlation = correlation(lt, le);
  }
  return table;
}

}  // namespace affinekit
