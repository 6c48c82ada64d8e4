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

#include "affinekit/params.hpp"

#include "affinekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace affinekit {

RealVector truncate(const RealVector& xi) {
  return xi.norm() <= 1.0 ? xi : RealVector::Zero(xi.size());
}

// ---------------------------------------------------------------------------
// LevyMeasure

LevyMeasure::LevyMeasure(std::vector<Atom> atoms) {
  for (auto& atom : atoms) {
    if (atom.location.size() == 0 || (atom.location.array() == 0.0).all())
      throw DomainError("Levy measure atom at the origin");
    if (!std::isfinite(atom.weight) || !atom.location.allFinite())
      throw DomainError("Levy measure atom is not finite");
  }
  for (auto& atom : atoms) {
    LevyMeasure single;
    single.atoms_.push_back(std::move(atom));
    accumulate(single, 1.0);
  }
}

void LevyMeasure::accumulate(const LevyMeasure& other, double weight) {
  if (weight == 0.0) return;
  for (const auto& atom : other.atoms_) {
    auto it = std::find_if(atoms_.begin(), atoms_.end(), [&](const Atom& a) {
      return a.location.size() == atom.location.size() && a.location == atom.location;
    });
    if (it != atoms_.end())
      it->weight += weight * atom.weight;
    else
      atoms_.push_back({weight * atom.weight, atom.location});
  }
}

double LevyMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

double LevyMeasure::total_variation() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += std::abs(a.weight);
  return s;
}

double LevyMeasure::min_weight() const {
  double w = kInfinity;
  for (const auto& a : atoms_) w = std::min(w, a.weight);
  return w;
}

Complex LevyMeasure::jump_integral(const ComplexVector& u) const {
  Complex s = 0.0;
  for (const auto& a : atoms_) {
    if (a.location.size() != u.size())
      throw DimensionError("jump_integral", static_cast<std::size_t>(a.location.size()),
                           static_cast<std::size_t>(u.size()));
    const Complex z = pairing(u, a.location);
    s += a.weight * (std::exp(z) - 1.0 - pairing(u, truncate(a.location)));
  }
  return s;
}

RealVector LevyMeasure::truncated_mean(std::size_t dim) const {
  RealVector s = RealVector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& a : atoms_) s += a.weight * truncate(a.location);
  return s;
}

Complex Characteristics::exponent(const ComplexVector& u) const {
  const ComplexVector Au = A.cast<Complex>() * u;
  return 0.5 * (u.array() * Au.array()).sum() + pairing(u, B) - C + nu.jump_integral(u);
}

// ---------------------------------------------------------------------------
// AffineParams

ParamData ParamData::zeros(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ParamData p;
  p.a = RealMatrix::Zero(n, n);
  p.alpha.assign(d, RealMatrix::Zero(n, n));
  p.b = RealVector::Zero(n);
  p.beta.assign(d, RealVector::Zero(n));
  p.gamma = RealVector::Zero(n);
  p.mu.assign(d, LevyMeasure{});
  return p;
}

namespace {

void require_square(const RealMatrix& m, std::size_t d, const std::string& name) {
  if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d)
    throw DimensionError(name + " must be d x d", d,
                         static_cast<std::size_t>(m.rows() == m.cols() ? m.rows() : -1));
  if (!m.allFinite()) throw AdmissibilityError(name + " has non-finite entries");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw AdmissibilityError(name + " is not symmetric");
}

void require_vector(const RealVector& v, std::size_t d, const std::string& name) {
  if (static_cast<std::size_t>(v.size()) != d)
    throw DimensionError(name, d, static_cast<std::size_t>(v.size()));
  if (!v.allFinite()) throw AdmissibilityError(name + " has non-finite entries");
}

void require_measure(const LevyMeasure& m, std::size_t d, const std::string& name) {
  for (const auto& a : m.atoms())
    if (static_cast<std::size_t>(a.location.size()) != d)
      throw DimensionError(name + " atom location", d, static_cast<std::size_t>(a.location.size()));
}

}  // namespace

AffineParams::AffineParams(StateSpace space, ParamData data)
    : space_(space), data_(std::move(data)) {
  const std::size_t d = space_.dim();
  require_square(data_.a, d, "a");
  if (data_.alpha.size() != d) throw DimensionError("alpha count", d, data_.alpha.size());
  for (std::size_t i = 0; i < d; ++i) require_square(data_.alpha[i], d, "alpha[" + std::to_string(i) + "]");
  require_vector(data_.b, d, "b");
  if (data_.beta.size() != d) throw DimensionError("beta count", d, data_.beta.size());
  for (std::size_t i = 0; i < d; ++i) require_vector(data_.beta[i], d, "beta[" + std::to_string(i) + "]");
  if (!std::isfinite(data_.c)) throw AdmissibilityError("c is not finite");
  require_vector(data_.gamma, d, "gamma");
  require_measure(data_.m, d, "m");
  if (data_.m.min_weight() < 0.0) throw AdmissibilityError("base measure m has a negative weight");
  if (data_.mu.size() != d) throw DimensionError("mu count", d, data_.mu.size());
  for (std::size_t i = 0; i < d; ++i) require_measure(data_.mu[i], d, "mu[" + std::to_string(i) + "]");
}

bool AffineParams::has_jumps() const {
  if (!data_.m.empty()) return true;
  return std::any_of(data_.mu.begin(), data_.mu.end(), [](const LevyMeasure& m) { return !m.empty(); });
}

bool AffineParams::has_killing() const {
  return data_.c != 0.0 || (data_.gamma.array() != 0.0).any();
}

Characteristics AffineParams::characteristics_unchecked(const RealVector& x) const {
  const std::size_t d = dim();
  if (static_cast<std::size_t>(x.size()) != d)
    throw DimensionError("characteristics_at", d, static_cast<std::size_t>(x.size()));
  Characteristics ch;
  ch.A = data_.a;
  ch.B = data_.b;
  ch.C = data_.c + data_.gamma.dot(x);
  ch.nu = data_.m;
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[static_cast<Eigen::Index>(i)];
    if (xi == 0.0) continue;
    ch.A += xi * data_.alpha[i];
    ch.B += xi * data_.beta[i];
    ch.nu.accumulate(data_.mu[i], xi);
  }
  return ch;
}

Characteristics AffineParams::characteristics_at(const RealVector& x) const {
  if (!space_.contains(x)) throw DomainError("characteristics_at: x is not in D");
  Characteristics ch = characteristics_unchecked(x);
  if (!ch.nu.empty() && ch.nu.min_weight() < 0.0)
    throw AdmissibilityError("nu(x, .) has a negative merged weight " + std::to_string(ch.nu.min_weight()));
  return ch;
}

double AffineParams::killing_rate(const RealVector& x) const { return data_.c + data_.gamma.dot(x); }

Complex AffineParams::F(const ComplexVector& u) const {
  if (static_cast<std::size_t>(u.size()) != dim())
    throw DimensionError("F", dim(), static_cast<std::size_t>(u.size()));
  const ComplexVector au = data_.a.cast<Complex>() * u;
  return 0.5 * (u.array() * au.array()).sum() + pairing(u, data_.b) - data_.c +
         data_.m.jump_integral(u);
}

ComplexVector AffineParams::R(const ComplexVector& u) const {
  const std::size_t d = dim();
  if (static_cast<std::size_t>(u.size()) != d) throw DimensionError("R", d, static_cast<std::size_t>(u.size()));
  ComplexVector r(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const ComplexVector au = data_.alpha[i].cast<Complex>() * u;
    r[static_cast<Eigen::Index>(i)] = 0.5 * (u.array() * au.array()).sum() + pairing(u, data_.beta[i]) -
                                      data_.gamma[static_cast<Eigen::Index>(i)] +
                                      data_.mu[i].jump_integral(u);
  }
  return r;
}

Complex AffineParams::exponent(const ComplexVector& u, const RealVector& x) const {
  return F(u) + pairing(R(u), x);
}

// ---------------------------------------------------------------------------
// validation

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NonPsdDiffusion: return "non_psd_diffusion";
    case Violation::Kind::NegativeJumpWeight: return "negative_jump_weight";
    case Violation::Kind::NegativeKillingRate: return "negative_killing_rate";
  }
  return "unknown";
}

namespace {

std::string format_point(const RealVector& x) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

ValidationReport validate(const AffineParams& params, const ValidationOptions& options) {
  ValidationReport report;
  report.notes.push_back(
      "killing rate enforced as c + <gamma, x> >= 0; the stated sign C(x) <= 0 conflicts "
      "with c = -F(0), gamma = -R(0) and is not used");

  auto points = params.space().affine_basis();
  auto extra = params.space().sample(options.samples, options.half_width);
  points.insert(points.end(), extra.begin(), extra.end());

  for (const auto& x : points) {
    ++report.points_checked;
    const Characteristics ch = params.characteristics_unchecked(x);

    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(ch.A, Eigen::EigenvaluesOnly);
    const double lambda_min = eig.eigenvalues().minCoeff();
    if (lambda_min < -options.psd_tolerance)
      report.violations.push_back({Violation::Kind::NonPsdDiffusion, x, lambda_min,
                                   "A(x) has eigenvalue " + std::to_string(lambda_min) + " at x = " +
                                       format_point(x)});

    if (!ch.nu.empty() && ch.nu.min_weight() < -options.weight_tolerance)
      report.violations.push_back({Violation::Kind::NegativeJumpWeight, x, ch.nu.min_weight(),
                                   "nu(x, .) has weight " + std::to_string(ch.nu.min_weight()) +
                                       " at x = " + format_point(x)});

    if (ch.C < -options.killing_tolerance)
      report.violations.push_back({Violation::Kind::NegativeKillingRate, x, ch.C,
                                   "killing rate " + std::to_string(ch.C) + " at x = " + format_point(x)});
  }
  report.valid = report.violations.empty();
  return report;
}

// ---------------------------------------------------------------------------
// presets

namespace presets {

AffineParams brownian(std::size_t d) {
  auto p = ParamData::zeros(d);
  p.a = RealMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  return AffineParams(StateSpace::full_space(d), std::move(p));
}

AffineParams cir(double kappa, double theta, double sigma) {
  auto p = ParamData::zeros(1);
  p.alpha[0](0, 0) = sigma * sigma;
  p.b[0] = kappa * theta;
  p.beta[0][0] = -kappa;
  return AffineParams(StateSpace::half_line(), std::move(p));
}

AffineParams parabola() {
  auto p = ParamData::zeros(2);
  p.a(0, 0) = 1.0;
  p.b[1] = 1.0;
  // 1/2 <u, alpha^1 u> = 2 u1 u2 and 1/2 <u, alpha^2 u> = 2 u2^2
  p.alpha[0] << 0.0, 2.0, 2.0, 0.0;
  p.alpha[1] << 0.0, 0.0, 0.0, 4.0;
  return AffineParams(StateSpace::parabola(), std::move(p));
}

AffineParams by_name(const std::string& name) {
  if (name == "brownian") return brownian();
  if (name == "cir") return cir();
  if (name == "parabola") return parabola();
  throw ConfigError("unknown preset '" + name + "' (expected brownian, cir or parabola)");
}

std::vector<std::string> names() { return {"brownian", "cir", "parabola"}; }

}  // namespace presets

}  // namespace affinekit
