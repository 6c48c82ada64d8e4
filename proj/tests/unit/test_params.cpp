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
#include "doctest.h"
#include "oracles.hpp"

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

RealMatrix m1(double v) { return RealMatrix::Constant(1, 1, v); }

// 2d process on R_{>=0} x R with every ingredient switched on.
AffineParams rich() {
  ParamData d = ParamData::zeros(2);
  d.a << 0, 0, 0, 1;
  d.alpha[0] << 0.5, 0.1, 0.1, 0.3;
  d.b << 0.5, 0.1;
  d.beta[0] << -1, 0.2;
  d.beta[1] << 0, 0;
  d.c = 0.1;
  d.gamma << 0.2, 0;
  d.m = LevyMeasure({{0.5, rv({0.3, 0.2})}, {1.0, rv({2.0, -1.5})}});
  d.mu[0] = LevyMeasure({{0.7, rv({0.5, 0.1})}});
  return AffineParams(StateSpace::orthant_plane(1, 1), d);
}

}  // namespace

TEST_CASE("characteristics of the zero process") {
  const AffineParams p(StateSpace::full_space(2), ParamData::zeros(2));
  const Characteristics c = p.characteristics_at(rv({1.5, -2}));
  CHECK(c.A.isZero());
  CHECK(c.B.isZero());
  CHECK(c.C == 0.0);
  CHECK(c.nu.empty());
  CHECK_FALSE(p.has_jumps());
  CHECK_FALSE(p.has_killing());
}

TEST_CASE("characteristics by substitution") {
  const double kappa = 2.0, theta = 0.5, sigma = 0.6;
  ParamData d = ParamData::zeros(1);
  d.alpha[0] = m1(sigma * sigma);
  d.b[0] = kappa * theta;
  d.beta[0][0] = -kappa;
  const AffineParams p(StateSpace::half_line(), d);
  const Characteristics c = p.characteristics_at(rv({2.0}));
  CHECK(c.A(0, 0) == doctest::Approx(2 * sigma * sigma));
  CHECK(c.B[0] == doctest::Approx(kappa * theta - 2 * kappa));
  CHECK(c.C == 0.0);

  ParamData j = ParamData::zeros(1);
  j.m = LevyMeasure({{1.0, rv({1.0})}});
  j.mu[0] = LevyMeasure({{0.5, rv({1.0})}});
  const Characteristics cj = AffineParams(StateSpace::half_line(), j).characteristics_at(rv({2.0}));
  REQUIRE(cj.nu.atoms().size() == 1);
  CHECK(cj.nu.atoms()[0].weight == doctest::Approx(2.0));
  CHECK(cj.nu.atoms()[0].location[0] == 1.0);

  CHECK_THROWS_AS(p.characteristics_at(rv({-1.0})), DomainError);
}

TEST_CASE("jump integral") {
  CHECK(LevyMeasure().jump_integral(cv({2.0})) == Complex(0.0));
  CHECK(LevyMeasure({{1.0, rv({2.0})}}).jump_integral(cv({0.0})) == Complex(0.0));
  const Complex v = LevyMeasure({{1.0, rv({0.5})}}).jump_integral(cv({1.0}));
  CHECK(v.real() == doctest::Approx(std::exp(0.5) - 1.5).epsilon(1e-14));
  CHECK(v.real() == doctest::Approx(0.148721).epsilon(1e-6));

  const std::vector<std::pair<double, RealVector>> atoms = {
      {0.3, rv({0.2, -0.9})}, {1.7, rv({1.5, 0.3})}, {0.05, rv({-0.1, 0.1})}};
  std::vector<Atom> lib;
  for (const auto& [w, xi] : atoms) lib.push_back({w, xi});
  const LevyMeasure m(lib);
  for (const ComplexVector& u : {cv({I, -2.0 * I}), cv({-0.5 + I, 0.3}), cv({0.0, 0.0})}) {
    const Complex want = oracle::jump_integral(atoms, u);
    CHECK(std::abs(m.jump_integral(u) - want) <= 1e-14 * (1 + std::abs(want)));
  }
}

TEST_CASE("measures merge and reject bad atoms") {
  LevyMeasure m({{1.0, rv({1.0})}, {0.5, rv({1.0})}, {0.2, rv({-2.0})}});
  CHECK(m.atoms().size() == 2);
  CHECK(m.total_mass() == doctest::Approx(1.7));
  m.accumulate(LevyMeasure({{-0.5, rv({-2.0})}}), 1.0);
  CHECK(m.min_weight() == doctest::Approx(-0.3));
  CHECK(m.total_variation() == doctest::Approx(1.8));
  CHECK_THROWS_AS(LevyMeasure({{1.0, rv({0.0})}}), DomainError);
  CHECK(truncate(rv({0.6, 0.8})) == rv({0.6, 0.8}));
  CHECK(truncate(rv({0.6, 0.81})).isZero());
}

TEST_CASE("F and R") {
  const AffineParams zero(StateSpace::full_space(2), ParamData::zeros(2));
  CHECK(zero.F(cv({1.0, I})) == Complex(0.0));
  CHECK(zero.R(cv({1.0, I})).isZero());

  const AffineParams p = rich();
  CHECK(p.F(cv({0.0, 0.0})) == Complex(-0.1));
  CHECK((p.R(cv({0.0, 0.0})) + p.data().gamma.cast<Complex>()).isZero());

  const AffineParams bm = presets::brownian(2);
  CHECK(bm.F(cv({1.0, 0.0})) == Complex(0.5));

  const double sigma = 0.6, lambda = 2.0;
  ParamData d = ParamData::zeros(1);
  d.alpha[0] = m1(sigma * sigma);
  d.beta[0][0] = -lambda;
  const AffineParams c(StateSpace::half_line(), d);
  for (Complex u : {Complex(-1.0), Complex(0.3, 2.0), Complex(0.0, -4.0)})
    CHECK(std::abs(c.R(cv({u}))[0] - (sigma * sigma * u * u / 2.0 - lambda * u)) < 1e-14);

  CHECK_THROWS_AS(p.F(cv({1.0})), DimensionError);
}

TEST_CASE("parabola preset generator") {
  const AffineParams p = presets::parabola();
  for (const ComplexVector& u : {cv({0.0, 0.0}), cv({1.0, 0.0}), cv({0.0, 1.0}), cv({0.4 - I, -1.0 + 0.5 * I})}) {
    const auto [F, R] = oracle::parabola_FR(u);
    CHECK(std::abs(p.F(u) - F) < 1e-14);
    CHECK((p.R(u) - R).norm() < 1e-14);
  }
  CHECK(p.F(cv({1.0, 0.0})) == Complex(0.5));
  CHECK(p.F(cv({0.0, 1.0})) == Complex(1.0));
  CHECK(p.R(cv({0.0, 1.0})) == cv({0.0, 2.0}));
}

TEST_CASE("Levy-Khintchine form of F + <x, R>") {
  const AffineParams p = rich();
  for (const RealVector& x : {rv({0, 0}), rv({1.3, -0.4}), rv({4.0, 2.0})}) {
    const Characteristics ch = p.characteristics_at(x);
    std::vector<std::pair<double, RealVector>> atoms;
    for (const auto& a : ch.nu.atoms()) atoms.emplace_back(a.weight, a.location);
    for (const ComplexVector& u : {cv({I, -I}), cv({-0.7 + 0.2 * I, 1.1 * I}), cv({0.0, 0.0})}) {
      const Complex quad = 0.5 * (u.transpose() * ch.A.cast<Complex>() * u)(0, 0);
      const Complex want = quad + pairing(u, ch.B) - ch.C + oracle::jump_integral(atoms, u);
      CHECK(std::abs(p.exponent(u, x) - want) <= 1e-13 * (1 + std::abs(want)));
      CHECK(std::abs(ch.exponent(u) - want) <= 1e-13 * (1 + std::abs(want)));
    }
  }
}

TEST_CASE("Re exponent on imaginary u is maximal at 0") {
  for (const AffineParams& p : {rich(), presets::parabola(), presets::cir(), presets::brownian()}) {
    const auto d = static_cast<Eigen::Index>(p.dim());
    for (const RealVector& x : p.space().sample(10, 3.0)) {
      const double at0 = p.exponent(ComplexVector::Zero(d), x).real();
      for (std::size_t k = 1; k <= 100; ++k) {
        RealVector y(d);
        for (Eigen::Index i = 0; i < d; ++i) y[i] = 6.0 * (halton(k, i == 0 ? 2 : 3) - 0.5);
        CHECK(p.exponent(I * y.cast<Complex>(), x).real() <= at0 + 1e-12);
      }
    }
  }
}

TEST_CASE("validate") {
  CHECK(validate(AffineParams(StateSpace::full_space(2), ParamData::zeros(2))).valid);
  for (const auto& name : presets::names()) CHECK(validate(presets::by_name(name)).valid);
  CHECK(validate(rich()).valid);

  ParamData h = ParamData::zeros(1);
  h.alpha[0] = m1(1.0);
  h.b[0] = 1.0;
  CHECK(validate(AffineParams(StateSpace::half_line(), h)).valid);

  ParamData f = ParamData::zeros(1);
  f.alpha[0] = m1(1.0);
  const ValidationReport bad = validate(AffineParams(StateSpace::full_space(1), f));
  CHECK_FALSE(bad.valid);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations[0].kind == Violation::Kind::NonPsdDiffusion);
  CHECK(bad.violations[0].witness[0] < 0.0);

  ParamData n = ParamData::zeros(1);
  n.m = LevyMeasure({{1.0, rv({1.0})}});
  n.mu[0] = LevyMeasure({{-1.0, rv({1.0})}});
  const ValidationReport neg = validate(AffineParams(StateSpace::half_line(), n));
  CHECK_FALSE(neg.valid);
  bool saw = false;
  for (const auto& v : neg.violations) saw = saw || v.kind == Violation::Kind::NegativeJumpWeight;
  CHECK(saw);

  ParamData k = ParamData::zeros(1);
  k.gamma[0] = -1.0;
  const ValidationReport kill = validate(AffineParams(StateSpace::half_line(), k));
  CHECK_FALSE(kill.valid);
  CHECK(kill.violations[0].kind == Violation::Kind::NegativeKillingRate);
}

TEST_CASE("shape and symmetry errors") {
  ParamData d = ParamData::zeros(2);
  d.b = RealVector::Zero(3);
  CHECK_THROWS_AS(AffineParams(StateSpace::full_space(2), d), DimensionError);
  ParamData s = ParamData::zeros(2);
  s.a << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(AffineParams(StateSpace::full_space(2), s), AdmissibilityError);
  ParamData w = ParamData::zeros(1);
  w.m = LevyMeasure({{-1.0, rv({1.0})}});
  CHECK_THROWS_AS(AffineParams(StateSpace::half_line(), w), AdmissibilityError);
  CHECK_THROWS_AS(presets::by_name("heston"), ConfigError);
}
