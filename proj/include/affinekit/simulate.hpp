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

#include "affinekit/params.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace affinekit {

inline constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

using TimeGrid = std::vector<double>;

struct JumpMark {
  std::size_t index;  // first grid index that includes the jump
  RealVector jump;
};

/// One discretized trajectory. States after `alive_until` are the cemetery
/// (stored as NaN) and contribute f(cemetery) = 0 to every expectation.
struct PathSample {
  std::shared_ptr<const TimeGrid> times;
  RealMatrix states;  // d x (steps + 1), column k at times[k]
  std::size_t alive_until = kNever;
  std::vector<JumpMark> jump_marks;
  /// Grid index at which stopped_ensemble froze the path.
  std::size_t stopped_at = kNever;
  /// Hit the overflow guard; reported as killed rather than as an explosion.
  bool censored = false;

  std::size_t size() const { return static_cast<std::size_t>(states.cols()); }
  bool alive_at(std::size_t k) const { return k < alive_until; }
  RealVector state(std::size_t k) const { return states.col(static_cast<Eigen::Index>(k)); }
};

struct Ensemble {
  std::shared_ptr<const TimeGrid> times;
  std::vector<PathSample> paths;

  std::size_t dim() const { return paths.empty() ? 0 : static_cast<std::size_t>(paths.front().states.rows()); }
  /// Index of t on the grid; DomainError when t is not a grid point.
  std::size_t grid_index(double t) const;
};

struct McEstimate {
  Complex value;
  double std_error = 0.0;
  std::size_t n_paths = 0;
};

/// Sample mean and standard error of complex samples (n >= 2).
McEstimate mc_estimate(std::span<const Complex> samples);

/// Independent generator for path `path_index`; the stream depends only on
/// (seed, path_index), so ensembles do not depend on scheduling.
std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path_index);

TimeGrid uniform_grid(double T, std::size_t n_steps);

/// One path on the uniform grid of [0, T] with `n_steps` steps.
/// Orthant-type spaces use a full-truncation Euler scheme with thinned jumps
/// and an exponential killing clock; the parabola is sampled exactly and only
/// for its canonical generator. Throws AdmissibilityError when validate()
/// rejects the parameters.
PathSample simulate(const AffineParams& p, const RealVector& x0, double T, std::size_t n_steps,
                    std::uint64_t seed, std::uint64_t path_index = 0);

/// X = (W + y, (W + y)^2) sampled exactly on `grid` (which starts at 0).
PathSample simulate_parabola_exact(const RealVector& x0, std::shared_ptr<const TimeGrid> grid,
                                   std::uint64_t seed, std::uint64_t path_index = 0);

/// `n_paths` paths sharing one grid; parallel over path index with the thread
/// count from AFFINE_KIT_THREADS.
Ensemble simulate_ensemble(const AffineParams& p, const RealVector& x0, double T, std::size_t n_steps,
                           std::size_t n_paths, std::uint64_t seed);

/// Estimate of E[exp<u, X_t> 1{alive at t}].
McEstimate mc_char_fn(const Ensemble& ensemble, double t, const ComplexVector& u);

/// Freezes each path at tau = first grid index, among multiples of `stride`,
/// with |X_k - X_0| >= r (or at which the path is in the cemetery).
Ensemble stopped_ensemble(const Ensemble& ensemble, double r, std::size_t stride = 1);

struct MartingaleTest {
  McEstimate estimate;
  double deviation = 0.0;  // |mean - 1|
  double threshold = 0.0;  // max(3 SE, tol)
  bool pass = false;
};

/// Sample mean of L(n, delta, u) = exp(<u, X_{n delta} - X_0>
///   - sum_{j=1}^n (phi(delta, u) + <rho(delta, u), X_{(j-1) delta}>)).
/// Stopped paths use n wedge N, with N the stop index on the delta grid.
MartingaleTest martingale_L_test(const AffineParams& p, const Ensemble& ensemble, double delta,
                                 std::size_t n, const ComplexVector& u, double tol);

struct AffinePoint {
  double t;
  ComplexVector u;
  McEstimate mc;
  Complex exact;
  double deviation;
  bool pass;  // deviation <= 3 SE
};

/// Compares mc_char_fn against char_fn(x0, t, u) at each (t, u).
std::vector<AffinePoint> affine_property_check(const AffineParams& p, const Ensemble& ensemble,
                                               const RealVector& x0,
                                               std::span<const std::pair<double, ComplexVector>> points,
                                               double tol);

struct CharacteristicsReport {
  std::vector<double> path_rel_error;  // |QV - int A ds|_F / |int A ds|_F per path
  double mean_path_rel_error = 0.0;
  /// Relative Frobenius error of the ensemble means.
  double ensemble_rel_error = 0.0;
  RealMatrix mean_qv;
  RealMatrix mean_integrated_A;
  /// Mean and standard error of X_T - X_0 - int B(X_s) ds per coordinate.
  RealVector drift_mean;
  RealVector drift_se;
  bool drift_pass = false;
  std::size_t paths_used = 0;
};

/// Realized covariation against the integrated diffusion characteristic.
/// Requires a killing-free diffusion (no jumps).
CharacteristicsReport characteristics_check(const Ensemble& ensemble, const AffineParams& p);

}  // namespace affinekit
