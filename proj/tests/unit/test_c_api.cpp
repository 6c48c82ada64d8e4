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

// Exercises the shared library through its C interface only.

#include "affinekit/affinekit.h"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <string>

TEST_CASE("process handles") {
  ak_process* p = nullptr;
  REQUIRE(ak_process_from_preset("parabola", &p) == AK_OK);
  CHECK(ak_process_dim(p) == 2);

  const double on[2] = {2.0, 4.0}, off[2] = {2.0, 5.0};
  int inside = -1;
  CHECK(ak_space_contains(p, on, &inside) == AK_OK);
  CHECK(inside == 1);
  CHECK(ak_space_contains(p, off, &inside) == AK_OK);
  CHECK(inside == 0);

  const ak_complex u[2] = {{1.0, 0.0}, {-1.0, 0.0}};
  double level = 0.0;
  CHECK(ak_space_support(p, u, &level) == AK_OK);
  CHECK(level == doctest::Approx(0.25));

  double basis[6];
  size_t count = 0;
  CHECK(ak_affine_basis(p, basis, 3, &count) == AK_OK);
  CHECK(count == 3);
  CHECK(basis[4] == -1.0);

  ak_complex F, R[2];
  const ak_complex e2[2] = {{0.0, 0.0}, {1.0, 0.0}};
  CHECK(ak_eval_F(p, e2, &F) == AK_OK);
  CHECK(ak_eval_R(p, e2, R) == AK_OK);
  CHECK(F.re == 1.0);
  CHECK(R[1].re == 2.0);

  int valid = 0;
  CHECK(ak_validate(p, &valid) == AK_OK);
  CHECK(valid == 1);

  ak_complex phi, psi[2];
  const ak_complex w[2] = {{0.0, 0.0}, {-1.0, 0.0}};
  CHECK(ak_transform_evaluate(p, 0.5, w, 1e-10, &phi, psi) == AK_OK);
  CHECK(phi.re == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-10));
  CHECK(psi[1].re == doctest::Approx(-0.5).epsilon(1e-10));

  CHECK(ak_transform_evaluate(p, 0.5, e2, 1e-10, &phi, psi) == AK_ERR_DOMAIN);
  CHECK(std::string(ak_last_error()).find("support() = inf") != std::string::npos);

  double res = 1.0;
  CHECK(ak_semiflow_residual(p, 0.1, 0.1, u, 1e-10, &res) == AK_OK);
  CHECK(res <= 1e-9);

  const double x[2] = {1.0, 1.0};
  const ak_complex iu[2] = {{0.0, 1.0}, {0.0, 0.0}};
  ak_complex cf;
  CHECK(ak_char_fn(p, x, 1.0, iu, 1e-10, &cf) == AK_OK);
  const std::complex<double> want = std::exp(std::complex<double>(-0.5, 1.0));
  CHECK(std::abs(std::complex<double>(cf.re, cf.im) - want) < 1e-9);

  ak_ensemble* e = nullptr;
  REQUIRE(ak_simulate_ensemble(p, x, 1.0, 10, 5000, 3, &e) == AK_OK);
  CHECK(ak_ensemble_paths(e) == 5000);
  CHECK(ak_ensemble_steps(e) == 10);
  double state[2];
  int alive = 0;
  CHECK(ak_ensemble_state(e, 7, 10, state, &alive) == AK_OK);
  CHECK(alive == 1);
  CHECK(state[1] == state[0] * state[0]);
  CHECK(ak_ensemble_state(e, 5000, 0, state, &alive) == AK_ERR_ARGUMENT);
  ak_complex mean;
  double se = 0.0;
  CHECK(ak_mc_char_fn(e, 1.0, iu, &mean, &se) == AK_OK);
  CHECK(std::abs(std::complex<double>(mean.re, mean.im) - want) <= 3 * se);
  ak_ensemble_free(e);
  ak_process_free(p);
}

TEST_CASE("error statuses") {
  ak_process* p = nullptr;
  CHECK(ak_process_from_preset("nope", &p) == AK_ERR_CONFIG);
  CHECK(ak_process_from_json("{", &p) == AK_ERR_CONFIG);
  CHECK(ak_process_from_json(R"({"space": {"kind": "full", "dim": 2}, "params": {"b": [1]}})", &p) ==
        AK_ERR_CONFIG);
  CHECK(ak_process_from_preset(nullptr, &p) == AK_ERR_ARGUMENT);
  REQUIRE(ak_process_from_json(R"({"space": {"kind": "full", "dim": 1}, "params": {"alpha": [[[1]]]}})", &p) ==
          AK_OK);
  int valid = 1;
  CHECK(ak_validate(p, &valid) == AK_OK);
  CHECK(valid == 0);
  const double x0[1] = {0.0};
  ak_ensemble* e = nullptr;
  CHECK(ak_simulate_ensemble(p, x0, 1.0, 10, 10, 1, &e) == AK_ERR_ADMISSIBILITY);
  ak_process_free(p);
  CHECK(std::strlen(ak_version()) > 0);
}

TEST_CASE("ak_run") {
  const auto dir = (std::filesystem::temp_directory_path() / "affinekit_capi_run").string();
  int status = -1;
  char* summary = nullptr;
  CHECK(ak_run(R"({"preset": "parabola", "verify_suite": ["semiflow"]})", "verify", dir.c_str(), nullptr, nullptr,
               &status, &summary) == AK_OK);
  CHECK(status == 0);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("report.json") != std::string::npos);
  ak_string_free(summary);

  summary = nullptr;
  CHECK(ak_run("{}", "bogus", dir.c_str(), nullptr, nullptr, &status, &summary) == AK_ERR_CONFIG);
  CHECK(status == 2);
}
