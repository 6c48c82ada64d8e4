/* Copyright 2026 The affine-kit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AFFINEKIT_AFFINEKIT_H
#define AFFINEKIT_AFFINEKIT_H

/* C interface of libaffinekit. Every call returns an ak_status; on failure
 * ak_last_error() describes the problem (thread-local, valid until the next
 * call on the same thread). Vectors are dense arrays of length dim. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AFFINEKIT_BUILDING)
#    define AK_API __declspec(dllexport)
#  else
#    define AK_API __declspec(dllimport)
#  endif
#else
#  define AK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ak_status {
  AK_OK = 0,
  AK_ERR_ARGUMENT = 1,   /* null pointer, bad size */
  AK_ERR_DIMENSION = 2,
  AK_ERR_DOMAIN = 3,     /* u not in U, x not in D, t < 0 */
  AK_ERR_ADMISSIBILITY = 4,
  AK_ERR_BLOW_UP = 5,
  AK_ERR_CONFIG = 6,
  AK_ERR_INTERNAL = 7
} ak_status;

typedef struct ak_complex {
  double re;
  double im;
} ak_complex;

typedef struct ak_process ak_process;
typedef struct ak_ensemble ak_ensemble;

AK_API const char* ak_version(void);
AK_API const char* ak_last_error(void);

/* processes */
AK_API ak_status ak_process_from_preset(const char* name, ak_process** out);
AK_API ak_status ak_process_from_json(const char* json_text, ak_process** out);
AK_API void ak_process_free(ak_process* process);
AK_API size_t ak_process_dim(const ak_process* process);

AK_API ak_status ak_space_contains(const ak_process* process, const double* x, int* inside);
AK_API ak_status ak_space_support(const ak_process* process, const ak_complex* u, double* value);
/* Writes up to `capacity` points of dim doubles each; `count` gets the total. */
AK_API ak_status ak_affine_basis(const ak_process* process, double* points, size_t capacity, size_t* count);

AK_API ak_status ak_eval_F(const ak_process* process, const ak_complex* u, ak_complex* out);
AK_API ak_status ak_eval_R(const ak_process* process, const ak_complex* u, ak_complex* out);
/* `valid` is 1 when the parameters are admissible. */
AK_API ak_status ak_validate(const ak_process* process, int* valid);

/* transform */
AK_API ak_status ak_transform_evaluate(const ak_process* process, double t, const ak_complex* u, double tol,
                                       ak_complex* phi, ak_complex* psi);
AK_API ak_status ak_char_fn(const ak_process* process, const double* x, double t, const ak_complex* u,
                            double tol, ak_complex* out);
AK_API ak_status ak_semiflow_residual(const ak_process* process, double t, double s, const ak_complex* u,
                                      double tol, double* residual);

/* simulation */
AK_API ak_status ak_simulate_ensemble(const ak_process* process, const double* x0, double T, size_t n_steps,
                                      size_t n_paths, uint64_t seed, ak_ensemble** out);
AK_API void ak_ensemble_free(ak_ensemble* ensemble);
AK_API size_t ak_ensemble_paths(const ak_ensemble* ensemble);
AK_API size_t ak_ensemble_steps(const ak_ensemble* ensemble);
/* State of path `path` at grid index `k`; `alive` is 0 in the cemetery. */
AK_API ak_status ak_ensemble_state(const ak_ensemble* ensemble, size_t path, size_t k, double* x, int* alive);
AK_API ak_status ak_mc_char_fn(const ak_ensemble* ensemble, double t, const ak_complex* u, ak_complex* mean,
                               double* std_error);

/* batch runner; task may be NULL to use the config's "task". seed and tol
 * overrides apply when the pointers are non-NULL. `summary` receives a JSON
 * string to release with ak_string_free. */
AK_API ak_status ak_run(const char* config_json, const char* task, const char* out_dir, const uint64_t* seed,
                        const double* tol, int* exit_status, char** summary);
AK_API void ak_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* AFFINEKIT_AFFINEKIT_H */
