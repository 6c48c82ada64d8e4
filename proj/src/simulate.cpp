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

#include "affinekit/simulate.hpp"

#include "affinekit/errors.hpp"
#include "affinekit/transform.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace affinekit {

namespace {

constexpr double kStateGuard = 1e8;
constexpr double kThinningRadius = 1.0;

RealMatrix psd_sqrt(const RealMatrix& A) {
  if (A.rows() == 1) return RealMatrix::Constant(1, 1, std::sqrt(std::max(A(0, 0), 0.0)));
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(A);
  const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

bool is_canonical_parabola(const AffineParams& p) {
  if (p.space().kind() != SpaceKind::Parabola || p.has_jumps() || p.has_killing()) return false;
  const ParamData ref = presets::parabola().data();
  const ParamData& d = p.data();
  const auto close = [](const auto& x, const auto& y) { return (x - y).cwiseAbs().maxCoeff() <= 1e-14; };
  if (!close(d.a, ref.a) || !close(d.b, ref.b)) return false;
  for (std::size_t i = 0; i < 2; ++i)
    if (!close(d.alpha[i], ref.alpha[i]) || !close(d.beta[i], ref.beta[i])) return false;
  return true;
}

void require_simulable(const AffineParams& p, const RealVector& x0) {
  if (!p.space().contains(x0)) throw DomainError("simulate: x0 is not in D");
  if (p.space().kind() == SpaceKind::Parabola) {
    if (!is_canonical_parabola(p))
      throw AdmissibilityError(
          "simulate: the parabola is sampled exactly and only for its canonical generator");
    return;
  }
  const ValidationReport report = validate(p);
  if (!report.valid) throw AdmissibilityError("simulate: " + report.violations.front().message);
}

/// Bound on the jump intensity of nu(y, .) for |y - x| <= kThinningRadius.
double intensity_bound(const AffineParams& p, const RealVector& x) {
  double bound = p.data().m.total_variation();
  for (std::size_t i = 0; i < p.dim(); ++i)
    bound += (std::abs(x[static_cast<Eigen::Index>(i)]) + kThinningRadius) * p.data().mu[i].total_variation();
  return bound;
}

/// Euler path with coefficients frozen at the projected left point.
PathSample euler_path(const AffineParams& p, const RealVector& x0, std::shared_ptr<const TimeGrid> grid,
                      std::uint64_t seed, std::uint64_t path_index) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  const std::size_t n_steps = grid->size() - 1;
  const StateSpace& space = p.space();
  const ParamData& data = p.data();

  const bool state_diffusion =
      std::any_of(data.alpha.begin(), data.alpha.end(), [](const RealMatrix& m) { return !m.isZero(0.0); });
  const RealMatrix constant_root = psd_sqrt(data.a);
  const bool jumps = p.has_jumps();
  const bool killing = p.has_killing();

  auto rng = path_stream(seed, path_index);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> exponential;
  std::uniform_real_distribution<double> uniform;

  PathSample path;
  path.times = grid;
  path.states.resize(d, static_cast<Eigen::Index>(n_steps + 1));
  path.states.col(0) = x0;

  const double kill_threshold = killing ? exponential(rng) : kInfinity;
  double hazard = 0.0;

  RealVector x = x0;
  RealVector z(d);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double dt = (*grid)[k + 1] - (*grid)[k];
    const RealVector xp = space.project(x);

    RealVector drift = data.b;
    RealMatrix A = data.a;
    for (Eigen::Index i = 0; i < d; ++i) {
      drift += xp[i] * data.beta[static_cast<std::size_t>(i)];
      if (state_diffusion) A += xp[i] * data.alpha[static_cast<std::size_t>(i)];
    }
    std::optional<LevyMeasure> nu;
    if (jumps) {
      nu = data.m;
      for (Eigen::Index i = 0; i < d; ++i) nu->accumulate(data.mu[static_cast<std::size_t>(i)], xp[i]);
      drift -= nu->truncated_mean(static_cast<std::size_t>(d));
    }

    for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng);
    const RealMatrix root = state_diffusion ? psd_sqrt(A) : constant_root;
    x += drift * dt + root * (std::sqrt(dt) * z);

    if (jumps) {
      // Thinning on (t_k, t_{k+1}] against a local bound on the intensity.
      double s = 0.0;
      double bound = intensity_bound(p, xp);
      while (bound > 0.0) {
        s += exponential(rng) / bound;
        if (s > dt) break;
        const RealVector xc = space.project(x);
        LevyMeasure local = data.m;
        for (Eigen::Index i = 0; i < d; ++i) local.accumulate(data.mu[static_cast<std::size_t>(i)], xc[i]);
        const double rate = std::max(local.total_mass(), 0.0);
        if (rate > bound) {
          bound = intensity_bound(p, xc) + rate;
          continue;
        }
        if (uniform(rng) * bound >= rate) continue;
        double pick = uniform(rng) * rate;
        const Atom* chosen = &local.atoms().back();
        for (const auto& atom : local.atoms()) {
          if (atom.weight <= 0.0) continue;
          if (pick < atom.weight) {
            chosen = &atom;
            break;
          }
          pick -= atom.weight;
        }
        x += chosen->location;
        path.jump_marks.push_back({k + 1, chosen->location});
      }
    }

    if (killing) hazard += std::max(p.killing_rate(xp), 0.0) * dt;

    const bool overflow = !x.allFinite() || x.cwiseAbs().maxCoeff() > kStateGuard;
    if (overflow) path.censored = true;
    if (overflow || hazard >= kill_threshold) {
      path.alive_until = k + 1;
      path.states.rightCols(static_cast<Eigen::Index>(n_steps - k)).setConstant(std::nan(""));
      return path;
    }
    path.states.col(static_cast<Eigen::Index>(k + 1)) = x;
  }
  return path;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t Ensemble::grid_index(double t) const {
  const TimeGrid& g = *times;
  auto it = std::lower_bound(g.begin(), g.end(), t - 1e-9 * std::max(1.0, std::abs(t)));
  if (it == g.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw DomainError("t = " + std::to_string(t) + " is not on the simulation grid");
  return static_cast<std::size_t>(it - g.begin());
}

McEstimate mc_estimate(std::span<const Complex> samples) {
  if (samples.size() < 2) throw DomainError("mc_estimate: at least two samples are required");
  McEstimate est;
  est.n_paths = samples.size();
  Complex sum = 0.0;
  for (const Complex& z : samples) sum += z;
  const double n = static_cast<double>(samples.size());
  est.value = sum / n;
  double ss = 0.0;
  for (const Complex& z : samples) ss += std::norm(z - est.value);
  est.std_error = std::sqrt(ss / (n - 1.0) / n);
  return est;
}

std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32),
                    0x61666b74u};
  return std::mt19937_64(seq);
}

TimeGrid uniform_grid(double T, std::size_t n_steps) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("simulate: T must be positive");
  if (n_steps == 0) throw DomainError("simulate: n_steps must be positive");
  TimeGrid g(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) g[k] = T * static_cast<double>(k) / static_cast<double>(n_steps);
  return g;
}

PathSample simulate_parabola_exact(const RealVector& x0, std::shared_ptr<const TimeGrid> grid,
                                   std::uint64_t seed, std::uint64_t path_index) {
  if (x0.size() != 2) throw DimensionError("simulate_parabola_exact", 2, static_cast<std::size_t>(x0.size()));
  if (!StateSpace::parabola().contains(x0)) throw DomainError("simulate_parabola_exact: x0 is off the parabola");
  if (!grid || grid->empty() || grid->front() != 0.0) throw DomainError("simulate_parabola_exact: grid must start at 0");

  auto rng = path_stream(seed, path_index);
  std::normal_distribution<double> normal;
  PathSample path;
  path.times = grid;
  path.states.resize(2, static_cast<Eigen::Index>(grid->size()));
  double w = x0[0];
  path.states.col(0) = x0;
  for (std::size_t k = 1; k < grid->size(); ++k) {
    const double dt = (*grid)[k] - (*grid)[k - 1];
    if (!(dt > 0.0)) throw DomainError("simulate_parabola_exact: grid must be increasing");
    w += std::sqrt(dt) * normal(rng);
    path.states(0, static_cast<Eigen::Index>(k)) = w;
    path.states(1, static_cast<Eigen::Index>(k)) = w * w;
  }
  return path;
}

PathSample simulate(const AffineParams& p, const RealVector& x0, double T, std::size_t n_steps,
                    std::uint64_t seed, std::uint64_t path_index) {
  if (static_cast<std::size_t>(x0.size()) != p.dim())
    throw DimensionError("simulate", p.dim(), static_cast<std::size_t>(x0.size()));
  auto grid = std::make_shared<const TimeGrid>(uniform_grid(T, n_steps));
  require_simulable(p, x0);
  if (p.space().kind() == SpaceKind::Parabola) return simulate_parabola_exact(x0, grid, seed, path_index);
  return euler_path(p, x0, grid, seed, path_index);
}

Ensemble simulate_ensemble(const AffineParams& p, const RealVector& x0, double T, std::size_t n_steps,
                           std::size_t n_paths, std::uint64_t seed) {
  if (static_cast<std::size_t>(x0.size()) != p.dim())
    throw DimensionError("simulate_ensemble", p.dim(), static_cast<std::size_t>(x0.size()));
  Ensemble ens;
  ens.times = std::make_shared<const TimeGrid>(uniform_grid(T, n_steps));
  require_simulable(p, x0);
  ens.paths.resize(n_paths);
  const bool exact = p.space().kind() == SpaceKind::Parabola;
  detail::parallel_for(n_paths, [&](std::size_t i) {
    ens.paths[i] = exact ? simulate_parabola_exact(x0, ens.times, seed, i) : euler_path(p, x0, ens.times, seed, i);
  });
  return ens;
}

McEstimate mc_char_fn(const Ensemble& ensemble, double t, const ComplexVector& u) {
  if (static_cast<std::size_t>(u.size()) != ensemble.dim())
    throw DimensionError("mc_char_fn", ensemble.dim(), static_cast<std::size_t>(u.size()));
  const std::size_t k = ensemble.grid_index(t);
  std::vector<Complex> samples(ensemble.paths.size());
  for (std::size_t i = 0; i < ensemble.paths.size(); ++i) {
    const PathSample& path = ensemble.paths[i];
    samples[i] = path.alive_at(k) ? std::exp(pairing(u, path.state(k))) : Complex(0.0);
  }
  return mc_estimate(samples);
}

Ensemble stopped_ensemble(const Ensemble& ensemble, double r, std::size_t stride) {
  if (!(r >= 0.0)) throw DomainError("stopped_ensemble: r must be >= 0");
  if (stride == 0) throw DomainError("stopped_ensemble: stride must be positive");
  Ensemble out = ensemble;
  if (r == kInfinity) return out;
  for (PathSample& path : out.paths) {
    const RealVector x0 = path.state(0);
    std::size_t stop = kNever;
    for (std::size_t k = 0; k < path.size(); k += stride) {
      if (!path.alive_at(k) || (path.state(k) - x0).norm() >= r) {
        stop = k;
        break;
      }
    }
    if (stop == kNever) continue;
    path.stopped_at = stop;
    if (path.alive_at(stop)) {
      const RealVector frozen = path.state(stop);
      for (std::size_t k = stop + 1; k < path.size(); ++k) path.states.col(static_cast<Eigen::Index>(k)) = frozen;
      path.alive_until = kNever;
      path.censored = false;
    }
    std::erase_if(path.jump_marks, [stop](const JumpMark& j) { return j.index > stop; });
  }
  return out;
}

MartingaleTest martingale_L_test(const AffineParams& p, const Ensemble& ensemble, double delta, std::size_t n,
                                 const ComplexVector& u, double tol) {
  if (static_cast<std::size_t>(u.size()) != p.dim())
    throw DimensionError("martingale_L_test", p.dim(), static_cast<std::size_t>(u.size()));
  if (!(delta > 0.0)) throw DomainError("martingale_L_test: delta must be positive");
  const TimeGrid& grid = *ensemble.times;
  const double dt = grid[1] - grid[0];
  const double ratio = delta / dt;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio)
    throw DomainError("martingale_L_test: delta is not a multiple of the grid step");
  if (n * stride >= grid.size()) throw DomainError("martingale_L_test: n * delta exceeds the horizon");

  Complex phi = 0.0;
  ComplexVector rho = ComplexVector::Zero(u.size());
  if (n > 0) {
    const TransformResult r = evaluate(p, delta, u, tol);
    if (!r.ok()) throw BlowUpError("martingale_L_test: transform at delta", r.blow_up_time);
    phi = r.phi;
    rho = r.rho();
  }

  std::vector<Complex> samples(ensemble.paths.size());
  for (std::size_t i = 0; i < ensemble.paths.size(); ++i) {
    const PathSample& path = ensemble.paths[i];
    std::size_t m = n;
    if (path.stopped_at != kNever) {
      if (path.stopped_at % stride != 0)
        throw DomainError("martingale_L_test: path stopped off the delta grid");
      m = std::min(m, path.stopped_at / stride);
    }
    const std::size_t last = m * stride;
    if (!path.alive_at(last)) {
      samples[i] = 0.0;
      continue;
    }
    const RealVector x0 = path.state(0);
    Complex exponent = pairing(u, path.state(last) - x0);
    for (std::size_t j = 1; j <= m; ++j) exponent -= phi + pairing(rho, path.state((j - 1) * stride));
    samples[i] = std::exp(exponent);
  }

  MartingaleTest test;
  if (samples.size() < 2) throw DomainError("martingale_L_test: at least two paths are required");
  test.estimate = mc_estimate(samples);
  test.deviation = std::abs(test.estimate.value - 1.0);
  test.threshold = std::max(3.0 * test.estimate.std_error, tol);
  test.pass = test.deviation <= test.threshold;
  return test;
}

std::vector<AffinePoint> affine_property_check(const AffineParams& p, const Ensemble& ensemble,
                                               const RealVector& x0,
                                               std::span<const std::pair<double, ComplexVector>> points,
                                               double tol) {
  std::vector<AffinePoint> rows;
  for (const auto& [t, u] : points) {
    AffinePoint row{t, u, mc_char_fn(ensemble, t, u), char_fn(p, x0, t, u, tol), 0.0, false};
    row.deviation = std::abs(row.mc.value - row.exact);
    row.pass = row.deviation <= 3.0 * row.mc.std_error;
    rows.push_back(std::move(row));
  }
  return rows;
}

CharacteristicsReport characteristics_check(const Ensemble& ensemble, const AffineParams& p) {
  if (p.has_jumps()) throw AdmissibilityError("characteristics_check: jumps present");
  if (p.has_killing()) throw AdmissibilityError("characteristics_check: killing terms must vanish");
  const auto d = static_cast<Eigen::Index>(p.dim());
  if (static_cast<std::size_t>(d) != ensemble.dim())
    throw DimensionError("characteristics_check", p.dim(), ensemble.dim());
  const TimeGrid& grid = *ensemble.times;

  CharacteristicsReport rep;
  rep.mean_qv = RealMatrix::Zero(d, d);
  rep.mean_integrated_A = RealMatrix::Zero(d, d);
  std::vector<RealVector> drift;

  for (const PathSample& path : ensemble.paths) {
    if (path.alive_until != kNever || path.censored) continue;
    RealMatrix qv = RealMatrix::Zero(d, d);
    RealMatrix ia = RealMatrix::Zero(d, d);
    RealVector ib = RealVector::Zero(d);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const double dt = grid[k + 1] - grid[k];
      const Characteristics ch = p.characteristics_unchecked(p.space().project(path.state(k)));
      const RealVector dx = path.state(k + 1) - path.state(k);
      qv += dx * dx.transpose();
      ia += ch.A * dt;
      ib += ch.B * dt;
    }
    const double denom = ia.norm();
    const double num = (qv - ia).norm();
    rep.path_rel_error.push_back(denom > 0.0 ? num / denom : (num > 0.0 ? kInfinity : 0.0));
    rep.mean_qv += qv;
    rep.mean_integrated_A += ia;
    drift.push_back(path.state(path.size() - 1) - path.state(0) - ib);
  }
  rep.paths_used = drift.size();
  if (rep.paths_used < 2) throw DomainError("characteristics_check: fewer than two surviving paths");
  const double n = static_cast<double>(rep.paths_used);
  rep.mean_qv /= n;
  rep.mean_integrated_A /= n;
  double sum_err = 0.0;
  for (double e : rep.path_rel_error) sum_err += e;
  rep.mean_path_rel_error = sum_err / n;
  const double denom = rep.mean_integrated_A.norm();
  const double num = (rep.mean_qv - rep.mean_integrated_A).norm();
  rep.ensemble_rel_error = denom > 0.0 ? num / denom : (num > 0.0 ? kInfinity : 0.0);

  rep.drift_mean = RealVector::Zero(d);
  rep.drift_se = RealVector::Zero(d);
  for (const auto& v : drift) rep.drift_mean += v;
  rep.drift_mean /= n;
  for (const auto& v : drift) rep.drift_se += (v - rep.drift_mean).cwiseAbs2();
  rep.drift_se = (rep.drift_se / (n - 1.0) / n).cwiseSqrt();
  rep.drift_pass = true;
  for (Eigen::Index i = 0; i < d; ++i)
    if (std::abs(rep.drift_mean[i]) > std::max(3.0 * rep.drift_se[i], 1e-12)) rep.drift_pass = false;
  return rep;
}

}  // namespace affinekit
