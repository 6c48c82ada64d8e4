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

#pragma once

#include "affinekit/ode.hpp"
#include "affinekit/params.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace affinekit {

enum class TransformStatus { Ok, BlowUp, DomainExit };

std::string to_string(TransformStatus status);

/// phi(t, u), psi(t, u) with the integrator diagnostics. Phi = exp(phi) and
/// rho = psi - u are derived on demand.
struct TransformResult {
  double t = 0.0;
  ComplexVector u;
  Complex phi = 0.0;
  ComplexVector psi;
  TransformStatus status = TransformStatus::Ok;
  /// Last accepted time before the flow left Q; only meaningful for BlowUp.
  double blow_up_time = kInfinity;
  std::size_t steps = 0;
  double err_est = 0.0;

  bool ok() const noexcept { return status == TransformStatus::Ok; }
  Complex Phi() const { return std::exp(phi); }
  ComplexVector rho() const { return psi - u; }
};

struct TransformOptions {
  double tol = 1e-10;
  /// Reject u outside U with a DomainError. Disabling it lets the Riccati
  /// flow be integrated from any complex u, e.g. to locate a pole.
  bool enforce_domain = true;
  std::size_t max_steps = 1'000'000;
  double overflow_guard = 1e8;
};

/// Integrates d psi/dt = R(psi), psi(0) = u together with d phi/dt = F(psi),
/// phi(0) = 0. Carrying phi as an ODE component yields the continuous
/// logarithm of Phi without any phase unwrapping.
TransformResult evaluate(const AffineParams& p, double t, const ComplexVector& u, double tol);
TransformResult evaluate(const AffineParams& p, double t, const ComplexVector& u,
                         const TransformOptions& options);

/// One integration through the ascending `times`; entries after a blow-up
/// carry the BlowUp status.
std::vector<TransformResult> evaluate_grid(const AffineParams& p, std::span<const double> times,
                                           const ComplexVector& u, const TransformOptions& options);

/// Full solution on [0, t] with cubic Hermite dense output of (phi, psi).
ode::Trajectory riccati_trajectory(const AffineParams& p, double t, const ComplexVector& u,
                                   const TransformOptions& options);

/// E_x[exp<u, X_t>] = exp(phi(t, u) + <x, psi(t, u)>). Throws BlowUpError when
/// (t, u) is not in Q.
Complex char_fn(const AffineParams& p, const RealVector& x, double t, const ComplexVector& u,
                double tol);

// ---------------------------------------------------------------------------
// parabola oracle: X = (W + y, (W + y)^2)

struct PhiPsi {
  Complex phi;
  ComplexVector psi;
};

/// Closed form phi = -1/2 Log(1 - 2 t u2) + u1^2 t / (2 (1 - 2 t u2)),
/// psi = u / (1 - 2 t u2), with the logarithm continued from t = 0.
/// Throws BlowUpError when the path 1 - 2 s u2, s in [0, t], hits zero.
PhiPsi closed_form_parabola(double t, const ComplexVector& u);

/// F(u) = u2 + u1^2 / 2, R(u) = (2 u1 u2, 2 u2^2).
std::pair<Complex, ComplexVector> parabola_FR(const ComplexVector& u);

// ---------------------------------------------------------------------------
// analytic verifiers

/// max(|phi(t+s,u) - phi(t,u) - phi(s,psi(t,u))|, |psi(t+s,u) - psi(s,psi(t,u))|)
double semiflow_residual(const AffineParams& p, double t, double s, const ComplexVector& u,
                         double tol);

struct FdRow {
  double h;
  Complex F_est;
  ComplexVector R_est;
  /// |F_est - F| + |R_est - R|, relative to max(1, |F| + |R|).
  double error;
};

struct FdRegularity {
  std::vector<FdRow> rows;
  Complex F_ref;
  ComplexVector R_ref;
  /// First-order Richardson extrapolation from the two smallest h.
  Complex F_richardson;
  ComplexVector R_richardson;
  double richardson_error = 0.0;
  /// Least-squares slope of log(error) against log(h); +inf when every
  /// forward difference is exact to round-off.
  double observed_order = 0.0;
};

/// Forward differences phi(h,u)/h and rho(h,u)/h against the reference
/// derivatives (F_eval/R_eval unless given).
FdRegularity fd_regularity(const AffineParams& p, const ComplexVector& u,
                           std::span<const double> h_list, double tol = 1e-12,
                           std::optional<std::pair<Complex, ComplexVector>> reference = std::nullopt);

struct BoundednessTable {
  std::vector<double> t;
  /// sup over the grid of |phi(t,u)|/t + |rho(t,u)|/t.
  std::vector<double> sup;
  bool divergence_suspected = false;
  /// (max - min) / max over the last three entries.
  double late_variation = 0.0;
};

/// `level`, when given, asserts every grid point lies in U_level.
BoundednessTable boundedness_probe(const AffineParams& p, std::span<const ComplexVector> grid,
                                   std::span<const double> t_list, double tol = 1e-12,
                                   std::optional<double> level = std::nullopt);

struct CpRow {
  double t;
  Complex D;
  double error;
};

struct CpLimitTable {
  std::vector<CpRow> rows;
  /// (F(u) + c) + <x, R(u) + gamma>
  Complex target;
  /// max error / t over the table.
  double fitted_C = 0.0;
  double log_slope = 0.0;
  double log_correlation = 0.0;
  /// All errors below round-off; slope and correlation are then undefined.
  bool exact = false;
};

/// D(t) = (exp(-<x,u>) E_x[exp<u,X_t>] - P_x(alive at t)) / t for each t.
CpLimitTable cp_limit_check(const AffineParams& p, const RealVector& x, const ComplexVector& u,
                            std::span<const double> t_list, double tol = 1e-12);

}  // namespace affinekit
