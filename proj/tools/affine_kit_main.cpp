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

// affine-kit transform|simulate|verify --config FILE --out DIR [--seed N] [--tol X]

#include "affinekit/affinekit.h"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kParseError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine process toolkit: Riccati transforms, simulation and property checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool quiet = false;

  for (const char* name : {"transform", "simulate", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override mc.seed");
    sub->add_option("--tol", tol, "override tolerances.ode")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "print only errors");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }

  const std::string task = app.get_subcommands().front()->get_name();
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "affine-kit: cannot read config '" << config_path << "'\n";
    return kParseError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  int exit_status = 0;
  char* summary = nullptr;
  const ak_status status = ak_run(text.c_str(), task.c_str(), out_dir.c_str(), seed ? &*seed : nullptr,
                                  tol ? &*tol : nullptr, &exit_status, &summary);
  if (status != AK_OK) {
    std::cerr << "affine-kit: " << ak_last_error() << "\n";
    ak_string_free(summary);
    return exit_status != 0 ? exit_status : 1;
  }
  if (exit_status != 0) std::cerr << "affine-kit: " << ak_last_error() << "\n";
  if (!quiet && summary) std::cout << summary << "\n";
  ak_string_free(summary);
  return exit_status;
}
