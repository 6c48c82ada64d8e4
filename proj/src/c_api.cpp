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

#include "affinekit/affinekit.h"

#include "affinekit/errors.hpp"
#include "affinekit/json_io.hpp"
#include "affinekit/runner.hpp"
#include "affinekit/simulate.hpp"
#include "affinekit/transform.hpp"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

struct ak_process {
  affinekit::AffineParams params;
};

struct ak_ensemble {
  affinekit::Ensemble ensemble;
};

namespace {

using namespace affinekit;

thread_local std::string last_error;

ak_status fail(ak_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class Fn>
ak_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const DimensionError& e) {
    return fail(AK_ERR_DIMENSION, e.what());
  } catch (const DomainError& e) {
    return fail(AK_ERR_DOMAIN, e.what());
  } catch (const AdmissibilityError& e) {
    return fail(AK_ERR_ADMISSIBILITY, e.what());
  } catch (const BlowUpError& e) {
    return fail(AK_ERR_BLOW_UP, e.what());
  } catch (const ConfigError& e) {
    return fail(AK_ERR_CONFIG, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(AK_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(AK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AK_ERR_INTERNAL, "unknown error");
  }
}

ComplexVector load(const ak_complex* u, std::size_t d) {
  ComplexVector v(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) v[static_cast<Eigen::Index>(i)] = {u[i].re, u[i].im};
  return v;
}

RealVector load(const double* x, std::size_t d) {
  return Eigen::Map<const RealVector>(x, static_cast<Eigen::Index>(d));
}

void store(const ComplexVector& v, ak_complex* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = {v[i].real(), v[i].imag()};
}

ak_complex to_c(Complex z) { return {z.real(), z.imag()}; }

#define AK_REQUIRE(cond)                                                      \
  do {                                                                        \
    if (!(cond)) return fail(AK_ERR_ARGUMENT, "invalid argument: " #cond);    \
  } while (0)

}  // namespace

extern "C" {

const char* ak_version(void) { return "0.1.0"; }

const char* ak_last_error(void) { return last_error.c_str(); }

ak_status ak_process_from_preset(const char* name, ak_process** out) {
  return guarded([&] {
    AK_REQUIRE(name && out);
    *out = new ak_process{presets::by_name(name)};
    return AK_OK;
  });
}

ak_status ak_process_from_json(const char* json_text, ak_process** out) {
  return guarded([&] {
    AK_REQUIRE(json_text && out);
    *out = new ak_process{json_io::process_from_json(nlohmann::json::parse(json_text))};
    return AK_OK;
  });
}

void ak_process_free(ak_process* process) { delete process; }

size_t ak_process_dim(const ak_process* process) { return process ? process->params.dim() : 0; }

ak_status ak_space_contains(const ak_process* process, const double* x, int* inside) {
  return guarded([&] {
    AK_REQUIRE(process && x && inside);
    *inside = process->params.space().contains(load(x, process->params.dim())) ? 1 : 0;
    return AK_OK;
  });
}

ak_status ak_space_support(const ak_process* process, const ak_complex* u, double* value) {
  return guarded([&] {
    AK_REQUIRE(process && u && value);
    *value = process->params.space().support(load(u, process->params.dim()));
    return AK_OK;
  });
}

ak_status ak_affine_basis(const ak_process* process, double* points, size_t capacity, size_t* count) {
  return guarded([&] {
    AK_REQUIRE(process && count && (points || capacity == 0));
    const auto basis = process->params.space().affine_basis();
    const std::size_t d = process->params.dim();
    *count = basis.size();
    for (std::size_t k = 0; k < basis.size() && k < capacity; ++k)
      for (std::size_t i = 0; i < d; ++i) points[k * d + i] = basis[k][static_cast<Eigen::Index>(i)];
    return AK_OK;
  });
}

ak_status ak_eval_F(const ak_process* process, const ak_complex* u, ak_complex* out) {
  return guarded([&] {
    AK_REQUIRE(process && u && out);
    *out = to_c(process->params.F(load(u, process->params.dim())));
    return AK_OK;
  });
}

ak_status ak_eval_R(const ak_process* process, const ak_complex* u, ak_complex* out) {
  return guarded([&] {
    AK_REQUIRE(process && u && out);
    store(process->params.R(load(u, process->params.dim())), out);
    return AK_OK;
  });
}

ak_status ak_validate(const ak_process* process, int* valid) {
  return guarded([&] {
    AK_REQUIRE(process && valid);
    const ValidationReport report = validate(process->params);
    *valid = report.valid ? 1 : 0;
    if (!report.valid && !report.violations.empty()) last_error = report.violations.front().message;
    return AK_OK;
  });
}

ak_status ak_transform_evaluate(const ak_process* process, double t, const ak_complex* u, double tol,
                                ak_complex* phi, ak_complex* psi) {
  return guarded([&] {
    AK_REQUIRE(process && u && phi && psi);
    const TransformResult r = evaluate(process->params, t, load(u, process->params.dim()), tol);
    if (!r.ok())
      throw BlowUpError("(t, u) is outside the maximal domain: " + to_string(r.status), r.blow_up_time);
    *phi = to_c(r.phi);
    store(r.psi, psi);
    return AK_OK;
  });
}

ak_status ak_char_fn(const ak_process* process, const double* x, double t, const ak_complex* u, double tol,
                     ak_complex* out) {
  return guarded([&] {
    AK_REQUIRE(process && x && u && out);
    const std::size_t d = process->params.dim();
    *out = to_c(char_fn(process->params, load(x, d), t, load(u, d), tol));
    return AK_OK;
  });
}

ak_status ak_semiflow_residual(const ak_process* process, double t, double s, const ak_complex* u, double tol,
                               double* residual) {
  return guarded([&] {
    AK_REQUIRE(process && u && residual);
    *residual = semiflow_residual(process->params, t, s, load(u, process->params.dim()), tol);
    return AK_OK;
  });
}

ak_status ak_simulate_ensemble(const ak_process* process, const double* x0, double T, size_t n_steps,
                               size_t n_paths, uint64_t seed, ak_ensemble** out) {
  return guarded([&] {
    AK_REQUIRE(process && x0 && out && n_steps > 0 && T > 0.0);
    *out = new ak_ensemble{
        simulate_ensemble(process->params, load(x0, process->params.dim()), T, n_steps, n_paths, seed)};
    return AK_OK;
  });
}

void ak_ensemble_free(ak_ensemble* ensemble) { delete ensemble; }

size_t ak_ensemble_paths(const ak_ensemble* ensemble) { return ensemble ? ensemble->ensemble.paths.size() : 0; }

size_t ak_ensemble_steps(const ak_ensemble* ensemble) {
  return ensemble && ensemble->ensemble.times ? ensemble->ensemble.times->size() - 1 : 0;
}

ak_status ak_ensemble_state(const ak_ensemble* ensemble, size_t path, size_t k, double* x, int* alive) {
  return guarded([&] {
    AK_REQUIRE(ensemble && x && alive);
    AK_REQUIRE(path < ensemble->ensemble.paths.size());
    const PathSample& p = ensemble->ensemble.paths[path];
    AK_REQUIRE(k < p.size());
    const RealVector s = p.state(k);
    for (Eigen::Index i = 0; i < s.size(); ++i) x[i] = s[i];
    *alive = p.alive_at(k) ? 1 : 0;
    return AK_OK;
  });
}

ak_status ak_mc_char_fn(const ak_ensemble* ensemble, double t, const ak_complex* u, ak_complex* mean,
                        double* std_error) {
  return guarded([&] {
    AK_REQUIRE(ensemble && u && mean && std_error);
    const McEstimate e = mc_char_fn(ensemble->ensemble, t, load(u, ensemble->ensemble.dim()));
    *mean = to_c(e.value);
    *std_error = e.std_error;
    return AK_OK;
  });
}

ak_status ak_run(const char* config_json, const char* task, const char* out_dir, const uint64_t* seed,
                 const double* tol, int* exit_status, char** summary) {
  return guarded([&] {
    AK_REQUIRE(config_json && out_dir && exit_status);
    std::optional<Task> chosen;
    if (task) {
      try {
        chosen = task_from_string(task);
      } catch (const ConfigError&) {
        *exit_status = kExitParseError;
        throw;
      }
    }
    const RunOutcome outcome =
        run_document(config_json, chosen, out_dir, seed ? std::optional<std::uint64_t>(*seed) : std::nullopt,
                     tol ? std::optional<double>(*tol) : std::nullopt);
    *exit_status = outcome.exit_status;
    if (summary) {
      nlohmann::json files = nlohmann::json::array();
      for (const auto& f : outcome.files) files.push_back(f.string());
      const nlohmann::json s{{"exit_status", outcome.exit_status},
                             {"message", outcome.message},
                             {"files", files},
                             {"report", outcome.report}};
      const std::string text = s.dump(2);
      *summary = static_cast<char*>(std::malloc(text.size() + 1));
      if (!*summary) return fail(AK_ERR_INTERNAL, "out of memory");
      std::memcpy(*summary, text.c_str(), text.size() + 1);
    }
    if (outcome.exit_status != kExitOk) last_error = outcome.message;
    return AK_OK;
  });
}

void ak_string_free(char* text) { std::free(text); }

}  // extern "C"
