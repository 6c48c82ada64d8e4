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

// Batch front end behind `affine-kit transform|simulate|verify`.
//
// Config document (every key except the process is optional):
//
//   {
//     "preset": "brownian" | "cir" | "parabola",      or "space" + "params"
//     "task": "transform" | "simulate" | "verify",
//     "verify_suite": ["semiflow", ...] | "all",
//     "grids": {"t": [..], "u": [[c, ..], ..], "x": [[..], ..]},
//     "mc": {"paths", "steps", "T", "seed", "x0", "delta", "n", "stop_radius"},
//     "tolerances": {"ode", "semiflow", "regularity", "order", "bounded_variation",
//                    "cp_correlation", "qv_rel", "h_list", "bounded_t", "cp_t"}
//   }

#include "affinekit/params.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace affinekit {

enum class Task { Transform, Simulate, Verify };

Task task_from_string(const std::string& name);
std::string to_string(Task task);

/// Exit statuses of a run.
enum ExitStatus : int { kExitOk = 0, kExitCheckFailed = 1, kExitParseError = 2, kExitValidationError = 3 };

struct McSettings {
  std::size_t paths = 10000;
  std::size_t steps = 100;
  double T = 1.0;
  std::uint64_t seed = 42;
  std::optional<RealVector> x0;
  double delta = 0.1;
  std::size_t n = 5;
  double stop_radius = 1.0;
};

struct Tolerances {
  double ode = 1e-10;
  double semiflow = 1e-7;
  double regularity = 1e-4;
  double order = 0.9;
  double bounded_variation = 0.1;
  double cp_correlation = 0.99;
  double qv_rel = 0.05;
  std::vector<double> h_list{1e-2, 1e-3, 1e-4};
  std::vector<double> bounded_t{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> cp_t{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
};

struct RunConfig {
  AffineParams params;
  std::string label;  // preset name or "custom"
  std::optional<Task> task;
  std::vector<std::string> verify_suite;
  std::vector<double> t_grid;
  /// Set when grids.t came from the document; only then must Monte Carlo
  /// times lie on the simulation grid.
  bool explicit_t_grid = false;
  std::vector<ComplexVector> u_grid;
  std::vector<RealVector> x_grid;
  McSettings mc;
  Tolerances tol;
};

std::vector<std::string> all_checks();

/// Parses a config document; throws ConfigError (or the shape errors of
/// AffineParams) on malformed input. Missing grids get per-space defaults.
RunConfig parse_config(const nlohmann::json& doc);

/// Up-front semantic checks: every grid u in U, every grid x in D, the
/// parameters pass validate(), Monte Carlo times on the simulation grid.
/// Throws DomainError or AdmissibilityError.
void check_config(const RunConfig& config);

struct RunOutcome {
  int exit_status = kExitOk;
  std::string message;
  nlohmann::json report;  // verify reports; summary for the other tasks
  std::vector<std::filesystem::path> files;
};

/// Runs one task and writes its outputs into `out_dir`:
/// transform.csv, paths.csv or report.json.
RunOutcome run(const RunConfig& config, Task task, const std::filesystem::path& out_dir);

/// Parse, check and run in one call, mapping failures onto exit statuses.
RunOutcome run_document(const std::string& config_text, std::optional<Task> task,
                        const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
                        std::optional<double> tol);

/// The single key of report.json that varies between identical runs.
inline constexpr const char* kTimestampKey = "generated_at";

}  // namespace affinekit
