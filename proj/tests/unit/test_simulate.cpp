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

#include "affinekit/errors.hpp"
#include "affinekit/params.hpp"
#include "affinekit/simulate.hpp"
#include "affinekit/transform.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <cstdlib>

using namespace affinekit;

namespace {

const Complex I(0.0, 1.0);

ComplexVector cv(std::initializer_list<Complex> v) {
  ComplexVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex e : v) x[i++] = e;
  return x;
}

RealVector rv(std::initializer_list<double> v) {
  RealVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

bool within(const McEstimate& e, Complex want, double k = 3.0) {
  return std::abs(e.value - want) <= k * e.std_error + 1e-14;
}

}  // namespace

TEST_CASE("zero process stays at x0") {
  const AffineParams p(StateSpace::full_space(2), ParamData::zeros(2));
  const PathSample s = simulate(p, rv({0.3, -1.0}), 1.0, 50, 1);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.state(k) == rv({0.3, -1.0}));
  const Ensemble e = simulate_ensemble(p, rv({0.3, -1.0}), 1.0, 10, 20, 1);
  const MartingaleTest m = martingale_L_test(p, e, 0.1, 5, cv({0.5 * I, -I}), 1e-10);
  CHECK(m.estimate.value == Complex(1.0));
  CHECK(m.estimate.std_error == 0.0);
  const CharacteristicsReport c = characteristics_check(e, p);
  CHECK(c.mean_qv.isZero());
  CHECK(c.mean_integrated_A.isZero());
}

TEST_CASE("Brownian terminal mean") {
  const Ensemble e = simulate_ensemble(presets::brownian(1), rv({0.0}), 1.0, 10, 100000, 11);
  std::vector<Complex> xs;
  for (const auto& p : e.paths) xs.emplace_back(p.state(10)[0]);
  const McEstimate m = mc_estimate(xs);
  CHECK(within(m, 0.0));
  CHECK(m.std_error == doctest::Approx(1.0 / std::sqrt(1e5)).epsilon(0.02));
}

TEST_CASE("CIR paths stay nonnegative") {
  const Ensemble e = simulate_ensemble(presets::cir(), rv({0.05}), 2.0, 200, 2000, 3);
  double lowest = kInfinity;
  for (const auto& p : e.paths) lowest = std::min(lowest, p.states.minCoeff());
  CHECK(lowest >= 0.0);
}

TEST_CASE("exact parabola sampler") {
  auto single = std::make_shared<const TimeGrid>(TimeGrid{0.0});
  const PathSample s0 = simulate_parabola_exact(rv({1.0, 1.0}), single, 5);
  CHECK(s0.size() == 1);
  CHECK(s0.state(0) == rv({1.0, 1.0}));

  const Ensemble e = simulate_ensemble(presets::parabola(), rv({0.5, 0.25}), 1.0, 20, 100000, 5);
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t k = 0; k < e.paths[i].size(); ++k) {
      const double y = e.paths[i].states(0, static_cast<Eigen::Index>(k));
      CHECK(e.paths[i].states(1, static_cast<Eigen::Index>(k)) == y * y);
    }
  std::vector<Complex> xs;
  for (const auto& p : e.paths) xs.emplace_back(p.state(20)[0]);
  CHECK(within(mc_estimate(xs), 0.5));

  CHECK_THROWS_AS(simulate_parabola_exact(rv({1.0, 2.0}), single, 5), DomainError);
  ParamData d = presets::parabola().data();
  d.b[1] = 2.0;
  CHECK_THROWS(simulate(AffineParams(StateSpace::parabola(), d), rv({0, 0}), 1.0, 10, 1));
}

TEST_CASE("mc_char_fn") {
  const Ensemble e = simulate_ensemble(presets::parabola(), rv({0.0, 0.0}), 1.0, 10, 100000, 9);
  const ComplexVector u = cv({0.3 + I, -0.5});
  const McEstimate at0 = mc_char_fn(e, 0.0, u);
  CHECK(at0.value == Complex(1.0));
  CHECK(at0.std_error == 0.0);
  const McEstimate g = mc_char_fn(e, 1.0, cv({I, 0.0}));
  CHECK(within(g, std::exp(-0.5)));
  CHECK(std::exp(-0.5) == doctest::Approx(0.6065).epsilon(1e-4));
  const McEstimate one = mc_char_fn(e, 0.5, cv({0.0, 0.0}));
  CHECK(one.value == Complex(1.0));
  CHECK(one.std_error == 0.0);
  CHECK(within(mc_char_fn(e, 0.7, u), oracle::parabola_expectation(0.7, 0.0, u)));
  CHECK_THROWS_AS(mc_char_fn(e, 0.55, u), DomainError);
}

TEST_CASE("ensembles are reproducible and independent of the thread count") {
  const AffineParams p = presets::cir();
  setenv("AFFINE_KIT_THREADS", "1", 1);
  const Ensemble a = simulate_ensemble(p, rv({0.5}), 1.0, 20, 64, 77);
  setenv("AFFINE_KIT_THREADS", "4", 1);
  const Ensemble b = simulate_ensemble(p, rv({0.5}), 1.0, 20, 64, 77);
  unsetenv("AFFINE_KIT_THREADS");
  const Ensemble c = simulate_ensemble(p, rv({0.5}), 1.0, 20, 64, 78);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < 64; ++i) {
    same = same && a.paths[i].states == b.paths[i].states;
    differs = differs || a.paths[i].states != c.paths[i].states;
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("martingale test") {
  const AffineParams p = presets::parabola();
  const Ensemble e = simulate_ensemble(p, rv({1.0, 1.0}), 1.0, 100, 100000, 21);
  const MartingaleTest none = martingale_L_test(p, e, 0.1, 0, cv({0.0, -1.0}), 1e-10);
  CHECK(none.estimate.value == Complex(1.0));
  CHECK(none.estimate.std_error == 0.0);
  const MartingaleTest m = martingale_L_test(p, e, 0.1, 5, cv({0.0, -1.0}), 1e-10);
  CHECK(m.pass);
  CHECK(m.deviation <= 3 * m.estimate.std_error);
  const Ensemble st = stopped_ensemble(e, 1.0, 10);
  CHECK(martingale_L_test(p, st, 0.1, 5, cv({0.0, -1.0}), 1e-10).pass);
  CHECK(martingale_L_test(p, st, 0.1, 5, cv({0.5 * I, -0.2 + I}), 1e-10).pass);
}

TEST_CASE("stopping") {
  const AffineParams p = presets::brownian(2);
  const Ensemble e = simulate_ensemble(p, rv({0, 0}), 1.0, 20, 200, 2);
  const Ensemble same = stopped_ensemble(e, kInfinity);
  for (std::size_t i = 0; i < e.paths.size(); ++i) CHECK(same.paths[i].states == e.paths[i].states);

  const Ensemble frozen = stopped_ensemble(e, 0.0);
  for (const auto& path : frozen.paths) {
    CHECK(path.stopped_at == 0);
    for (std::size_t k = 0; k < path.size(); ++k) CHECK(path.state(k) == rv({0, 0}));
  }
  const MartingaleTest m = martingale_L_test(p, frozen, 0.1, 5, cv({I, 0.3 * I}), 1e-10);
  CHECK(std::abs(m.estimate.value - 1.0) < 1e-15);
  CHECK(m.estimate.std_error == 0.0);

  const Ensemble r1 = stopped_ensemble(e, 0.5, 2);
  for (const auto& path : r1.paths) {
    if (path.stopped_at == kNever) continue;
    CHECK(path.stopped_at % 2 == 0);
    CHECK(path.state(path.stopped_at).norm() >= 0.5);
    CHECK(path.state(path.size() - 1) == path.state(path.stopped_at));
  }
}

TEST_CASE("characteristics") {
  const Ensemble bm = simulate_ensemble(presets::brownian(1), rv({0.0}), 1.0, 1000, 400, 4);
  const CharacteristicsReport r = characteristics_check(bm, presets::brownian(1));
  CHECK(r.mean_integrated_A(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(r.mean_qv(0, 0) - 1.0) < 5.0 * std::sqrt(2.0 / 1000.0 / 400.0) + 1e-3);
  for (double e : r.path_rel_error) CHECK(e < 6.0 * std::sqrt(2.0 / 1000.0));

  const AffineParams p = presets::parabola();
  const Ensemble pe = simulate_ensemble(p, rv({0, 0}), 1.0, 1000, 400, 4);
  const CharacteristicsReport pr = characteristics_check(pe, p);
  CHECK(pr.mean_qv(0, 0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(pr.ensemble_rel_error < 0.05);
  CHECK(pr.drift_pass);

  ParamData k = ParamData::zeros(1);
  k.c = 0.5;
  const AffineParams killed(StateSpace::full_space(1), k);
  const Ensemble ke = simulate_ensemble(killed, rv({0.0}), 1.0, 10, 10, 1);
  CHECK_THROWS_AS(characteristics_check(ke, killed), AdmissibilityError);
}

TEST_CASE("killing clock") {
  ParamData k = ParamData::zeros(1);
  k.a(0, 0) = 1.0;
  k.c = 0.7;
  const AffineParams p(StateSpace::full_space(1), k);
  const Ensemble e = simulate_ensemble(p, rv({0.0}), 1.0, 50, 50000, 8);
  CHECK(within(mc_char_fn(e, 1.0, cv({0.0})), std::exp(-0.7)));
  CHECK(within(mc_char_fn(e, 0.4, cv({I})), char_fn(p, rv({0.0}), 0.4, cv({I}), 1e-10)));
  for (const auto& path : e.paths)
    if (path.alive_until != kNever) CHECK(std::isnan(path.states(0, static_cast<Eigen::Index>(path.size() - 1))));
}

TEST_CASE("compound Poisson jumps") {
  // dX = -lambda h(xi) dt + jumps of size xi at rate lambda
  const double lambda = 1.5, xi = 0.6;
  ParamData d = ParamData::zeros(1);
  d.m = LevyMeasure({{lambda, rv({xi})}});
  const AffineParams p(StateSpace::full_space(1), d);
  const Ensemble e = simulate_ensemble(p, rv({0.0}), 1.0, 20, 50000, 12);
  for (double u : {1.0, 2.5}) {
    const Complex iu(0.0, u);
    const Complex want = std::exp(lambda * (std::exp(iu * xi) - 1.0 - iu * xi));
    CHECK(within(mc_char_fn(e, 1.0, cv({iu})), want));
    CHECK(std::abs(char_fn(p, rv({0.0}), 1.0, cv({iu}), 1e-10) - want) < 1e-9);
  }
}

TEST_CASE("state-dependent jumps on the half line") {
  ParamData d = ParamData::zeros(1);
  d.b[0] = 0.5;
  d.beta[0][0] = -1.0;
  d.mu[0] = LevyMeasure({{0.8, rv({0.5})}});
  const AffineParams p(StateSpace::half_line(), d);
  const Ensemble e = simulate_ensemble(p, rv({1.0}), 1.0, 400, 40000, 13);
  for (Complex u : {Complex(0.0, 1.0), Complex(-1.0, 0.0)}) {
    const Complex want = char_fn(p, rv({1.0}), 1.0, cv({u}), 1e-10);
    CHECK(within(mc_char_fn(e, 1.0, cv({u})), want, 4.0));
  }
}
