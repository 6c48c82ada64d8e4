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

#include "affinekit/state_space.hpp"

#include "affinekit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace affinekit {

namespace {

constexpr double kParabolaBand = 1e-12;
constexpr std::array<unsigned, 12> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::OrthantPlane: return "orthant";
    case SpaceKind::Parabola: return "parabola";
    case SpaceKind::FullSpace: return "full";
    case SpaceKind::HalfLine: return "halfline";
  }
  return "unknown";
}

StateSpace StateSpace::orthant_plane(std::size_t m, std::size_t n) {
  if (m + n == 0) throw DomainError("orthant_plane: m + n must be at least 1");
  return StateSpace(SpaceKind::OrthantPlane, m + n, m, n);
}

StateSpace StateSpace::parabola() { return StateSpace(SpaceKind::Parabola, 2, 0, 0); }

StateSpace StateSpace::full_space(std::size_t d) {
  if (d == 0) throw DomainError("full_space: dimension must be at least 1");
  return StateSpace(SpaceKind::FullSpace, d, 0, d);
}

StateSpace StateSpace::half_line() { return StateSpace(SpaceKind::HalfLine, 1, 1, 0); }

void StateSpace::check_dim(std::size_t got, const char* what) const {
  if (got != dim_) throw DimensionError(what, dim_, got);
}

bool StateSpace::contains(const RealVector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), "contains");
  if (!x.allFinite()) return false;
  if (kind_ == SpaceKind::Parabola) {
    const double y2 = x[0] * x[0];
    return std::abs(x[1] - y2) <= kParabolaBand * std::max(1.0, y2);
  }
  for (std::size_t i = 0; i < m_; ++i)
    if (x[static_cast<Eigen::Index>(i)] < 0.0) return false;
  return true;
}

double StateSpace::support(const ComplexVector& u) const {
  check_dim(static_cast<std::size_t>(u.size()), "support");
  if (kind_ == SpaceKind::Parabola) {
    // sup_y p*y + q*y^2
    const double p = u[0].real();
    const double q = u[1].real();
    if (q > 0.0) return kInfinity;
    if (q == 0.0) return p == 0.0 ? 0.0 : kInfinity;
    return -p * p / (4.0 * q);
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const double re = u[static_cast<Eigen::Index>(i)].real();
    if (i < m_ ? re > 0.0 : re != 0.0) return kInfinity;
  }
  return 0.0;
}

std::vector<RealVector> StateSpace::affine_basis() const {
  std::vector<RealVector> pts;
  if (kind_ == SpaceKind::Parabola) {
    pts.push_back(RealVector::Zero(2));
    pts.push_back((RealVector(2) << 1.0, 1.0).finished());
    pts.push_back((RealVector(2) << -1.0, 1.0).finished());
    return pts;
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  pts.push_back(RealVector::Zero(d));
  for (Eigen::Index i = 0; i < d; ++i) pts.push_back(RealVector::Unit(d, i));
  return pts;
}

std::vector<RealVector> StateSpace::sample(std::size_t count, double half_width) const {
  std::vector<RealVector> pts;
  pts.reserve(count);
  const auto d = static_cast<Eigen::Index>(dim_);
  for (std::size_t k = 1; k <= count; ++k) {
    if (kind_ == SpaceKind::Parabola) {
      const double y = half_width * (2.0 * halton(k, 2) - 1.0);
      pts.push_back((RealVector(2) << y, y * y).finished());
      continue;
    }
    RealVector x(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double h = halton(k, kPrimes[static_cast<std::size_t>(i) % kPrimes.size()]);
      x[i] = static_cast<std::size_t>(i) < m_ ? half_width * h : half_width * (2.0 * h - 1.0);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

RealVector StateSpace::project(const RealVector& x) const {
  check_dim(static_cast<std::size_t>(x.size()), "project");
  RealVector y = x;
  for (std::size_t i = 0; i < m_; ++i) {
    auto& v = y[static_cast<Eigen::Index>(i)];
    v = std::max(v, 0.0);
  }
  return y;
}

std::string StateSpace::describe() const {
  switch (kind_) {
    case SpaceKind::OrthantPlane:
      return "orthant(m=" + std::to_string(m_) + ", n=" + std::to_string(n_) + ")";
    case SpaceKind::Parabola: return "parabola";
    case SpaceKind::FullSpace: return "full(d=" + std::to_string(dim_) + ")";
    case SpaceKind::HalfLine: return "halfline";
  }
  return "unknown";
}

std::size_t affine_rank(const std::vector<RealVector>& points) {
  if (points.size() < 2) return 0;
  const auto d = points.front().size();
  RealMatrix diff(d, static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t j = 1; j < points.size(); ++j)
    diff.col(static_cast<Eigen::Index>(j - 1)) = points[j] - points[0];
  Eigen::FullPivLU<RealMatrix> lu(diff);
  return static_cast<std::size_t>(lu.rank());
}

double halton(std::size_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace affinekit
