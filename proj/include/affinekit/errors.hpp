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

#include <stdexcept>
#include <string>

namespace affinekit {

/// Base class of every exception thrown by the library. The C API maps each
/// subclass onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, std::size_t expected, std::size_t got)
      : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

/// A point or transform variable lies outside its admissible set (x not in D,
/// u not in U, a time off the simulation grid).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Riccati flow left Q before the requested time.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t_star)
      : Error(what + " (blow-up at t* = " + std::to_string(t_star) + ")"), t_star_(t_star) {}
  double t_star() const noexcept { return t_star_; }

 private:
  double t_star_;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace affinekit
