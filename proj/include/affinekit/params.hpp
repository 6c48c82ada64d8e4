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

#include "affinekit/state_space.hpp"

#include <string>
#include <vector>

namespace affinekit {

/// Truncation function h(xi) = xi * 1{|xi| <= 1}.
RealVector truncate(const RealVector& xi);

struct Atom {
  double weight;
  RealVector location;
};

/// Finite atomic (finite activity) measure on R^d \ {0}.
///
/// Weights may be negative when the measure is one of the state-dependent
/// components mu^i; what must be nonnegative is the merged measure nu(x, .).
class LevyMeasure {
 public:
  LevyMeasure() = default;
  explicit LevyMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }

  /// Adds `weight * other` atom by atom, merging equal locations.
  void accumulate(const LevyMeasure& other, double weight);

  /// Sum of weights (the jump intensity when all weights are nonnegative).
  double total_mass() const;
  double total_variation() const;
  double min_weight() const;

  /// sum_i w_i (exp<xi_i, u> - 1 - <h(xi_i), u>)
  Complex jump_integral(const ComplexVector& u) const;

  /// sum_i w_i h(xi_i); the drift correction of an uncompensated jump part.
  RealVector truncated_mean(std::size_t dim) const;

 private:
  std::vector<Atom> atoms_;
};

/// Differential characteristics at a point x of D.
struct Characteristics {
  RealMatrix A;
  RealVector B;
  double C = 0.0;  // killing rate c + <gamma, x>
  LevyMeasure nu;

  /// 1/2 <u, A u> + <B, u> - C + jump integral against nu.
  Complex exponent(const ComplexVector& u) const;
};

/// Raw parameter tuple; shape-checked when wrapped in AffineParams.
struct ParamData {
  RealMatrix a;
  std::vector<RealMatrix> alpha;
  RealVector b;
  std::vector<RealVector> beta;
  double c = 0.0;
  RealVector gamma;
  LevyMeasure m;
  std::vector<LevyMeasure> mu;

  /// All-zero tuple of dimension d.
  static ParamData zeros(std::size_t d);
};

/// Immutable Levy-Khintchine parameter set (a, alpha^i, b, beta^i, c, gamma^i,
/// m, mu^i) attached to a state space.
class AffineParams {
 public:
  /// Throws DimensionError on shape mismatch, AdmissibilityError if a or
  /// alpha^i are not symmetric or m carries negative weights.
  AffineParams(StateSpace space, ParamData data);

  const StateSpace& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  const ParamData& data() const noexcept { return data_; }

  bool has_jumps() const;
  bool has_killing() const;

  /// A(x), B(x), C(x), nu(x, .). Throws DomainError if x is not in D and
  /// AdmissibilityError if nu(x, .) has a negative merged weight.
  Characteristics characteristics_at(const RealVector& x) const;

  /// Same as characteristics_at without the membership and sign checks.
  Characteristics characteristics_unchecked(const RealVector& x) const;

  double killing_rate(const RealVector& x) const;

  Complex F(const ComplexVector& u) const;
  ComplexVector R(const ComplexVector& u) const;

  /// F(u) + <R(u), x>
  Complex exponent(const ComplexVector& u, const RealVector& x) const;

 private:
  StateSpace space_;
  ParamData data_;
};

struct Violation {
  enum class Kind { NonPsdDiffusion, NegativeJumpWeight, NegativeKillingRate };
  Kind kind;
  RealVector witness;
  double value;  // offending eigenvalue, weight or rate
  std::string message;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
  bool valid = true;
  std::size_t points_checked = 0;
  std::vector<Violation> violations;
  std::vector<std::string> notes;
};

struct ValidationOptions {
  std::size_t samples = 64;
  double half_width = 5.0;
  double psd_tolerance = 1e-10;
  double killing_tolerance = 1e-12;
  double weight_tolerance = 1e-12;
};

/// Pointwise admissibility check on affine_basis() plus `samples` quasi-random
/// points of D. Violations are reported, never thrown.
ValidationReport validate(const AffineParams& params, const ValidationOptions& options = {});

/// Built-in oracle processes.
namespace presets {

/// Standard Brownian motion on R^d (a = I).
AffineParams brownian(std::size_t d = 2);

/// Square-root diffusion dX = kappa (theta - X) dt + sigma sqrt(X) dW on R_{>=0}.
AffineParams cir(double kappa = 2.0, double theta = 0.5, double sigma = 0.6);

/// Generator of X = (W, W^2) on the parabola:
/// F(u) = u2 + u1^2 / 2, R(u) = (2 u1 u2, 2 u2^2).
AffineParams parabola();

/// Resolves "brownian", "cir" or "parabola"; throws ConfigError otherwise.
AffineParams by_name(const std::string& name);

std::vector<std::string> names();

}  // namespace presets

}  // namespace affinekit
