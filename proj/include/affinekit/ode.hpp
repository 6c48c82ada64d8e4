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

#include <functional>
#include <span>
#include <vector>

namespace affinekit::ode {

using Rhs = std::function<ComplexVector(const ComplexVector&)>;
using GuardNorm = std::function<double(const ComplexVector&)>;

struct Options {
  double atol = 1e-10;
  double rtol = 1e-10;
  std::size_t max_steps = 1'000'000;
  /// An accepted step shorter than this fraction of the final time counts as
  /// a collapse of the step size.
  double min_step_fraction = 1e-12;
  /// Integration stops once guard(y) exceeds this value.
  double overflow_guard = 1e8;
  bool record_trajectory = false;
};

enum class Status { Ok, StepCollapse, Overflow, MaxSteps };

/// Accepted step with its derivative, for Hermite dense output.
struct Node {
  double t;
  ComplexVector y;
  ComplexVector f;
};

/// Accepted nodes of one integration; evaluates the piecewise cubic Hermite
/// interpolant between them.
class Trajectory {
 public:
  void push(Node node) { nodes_.push_back(std::move(node)); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  bool empty() const noexcept { return nodes_.empty(); }
  double t_begin() const { return nodes_.front().t; }
  double t_end() const { return nodes_.back().t; }

  /// Throws DomainError outside [t_begin, t_end].
  ComplexVector interpolate(double t) const;

 private:
  std::vector<Node> nodes_;
};

struct Outcome {
  Status status = Status::Ok;
  /// Last accepted time; equals the final stop time when status is Ok.
  double t_reached = 0.0;
  /// Solution at each stop time that was reached, in order.
  std::vector<ComplexVector> at_stops;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Sum of the local error estimates (max-norm) of the accepted steps.
  double err_est = 0.0;
  Trajectory trajectory;
};

/// Integrates y' = f(y) from t = 0 with the Dormand-Prince 5(4) pair,
/// stopping exactly at each of the ascending, nonnegative `stops`.
/// Non-finite trial values are treated as rejected steps, so a solution
/// running into a singularity ends in StepCollapse or Overflow rather than
/// producing NaNs.
Outcome integrate(const Rhs& f, const ComplexVector& y0, std::span<const double> stops,
                  const Options& options, const GuardNorm& guard = {});

}  // namespace affinekit::ode
