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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace affinekit {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Bilinear (not Hermitian) pairing <u, x> used throughout the transform
/// formulas; u complex, x real.
inline Complex pairing(const ComplexVector& u, const RealVector& x) {
  return (u.array() * x.array().cast<Complex>()).sum();
}

enum class SpaceKind { OrthantPlane, Parabola, FullSpace, HalfLine };

std::string to_string(SpaceKind kind);

/// The state space D of an affine process.
///
/// Only variants with an exact closed-form support function are shipped:
///   - OrthantPlane(m, n): R_{>=0}^m x R^n, d = m + n
///   - Parabola:           {(y, y^2) : y in R}, d = 2
///   - FullSpace(d):       R^d
///   - HalfLine:           R_{>=0}, d = 1
///
/// FullSpace and HalfLine are OrthantPlane(0, d) and OrthantPlane(1, 0) with a
/// different label; they share all geometry.
class StateSpace {
 public:
  static StateSpace orthant_plane(std::size_t m, std::size_t n);
  static StateSpace parabola();
  static StateSpace full_space(std::size_t d);
  static StateSpace half_line();

  SpaceKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Number of nonnegative coordinates (orthant-type spaces; 0 for the parabola).
  std::size_t nonnegative_count() const noexcept { return m_; }
  std::size_t free_count() const noexcept { return n_; }

  /// Membership in D. The parabola uses a relative band of 1e-12.
  bool contains(const RealVector& x) const;

  /// sup_{x in D} Re<u, x>, in closed form; +inf when unbounded.
  /// u is in U iff the result is finite and in U_k iff it is <= k.
  double support(const ComplexVector& u) const;

  bool in_domain(const ComplexVector& u) const { return support(u) < kInfinity; }

  /// d + 1 affinely independent points of D.
  std::vector<RealVector> affine_basis() const;

  /// `count` quasi-random points of D (Halton sequence) inside the box where
  /// every free coordinate lies in [-half_width, half_width] and every
  /// nonnegative coordinate in [0, half_width]. Parabola points are (y, y^2)
  /// with y in [-half_width, half_width].
  std::vector<RealVector> sample(std::size_t count, double half_width) const;

  /// Nearest point of D used for coefficient evaluation in Euler schemes:
  /// nonnegative coordinates are clamped at zero. Identity for the parabola.
  RealVector project(const RealVector& x) const;

  std::string describe() const;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  StateSpace(SpaceKind kind, std::size_t dim, std::size_t m, std::size_t n)
      : kind_(kind), dim_(dim), m_(m), n_(n) {}

  void check_dim(std::size_t got, const char* what) const;

  SpaceKind kind_;
  std::size_t dim_;
  std::size_t m_;
  std::size_t n_;
};

/// Rank of the difference matrix {p_i - p_0}; equals d iff the points are
/// affinely independent.
std::size_t affine_rank(const std::vector<RealVector>& points);

/// Radical-inverse Halton coordinate for the given prime base.
double halton(std::size_t index, unsigned base);

}  // namespace affinekit
