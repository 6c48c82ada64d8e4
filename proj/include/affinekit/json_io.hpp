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

// JSON schemas of the process description:
//
//   space:  {"kind": "orthant" | "parabola" | "full" | "halfline", "m": int, "n": int, "dim": int}
//   params: {"a": [[..]], "alpha": [[[..]]], "b": [..], "beta": [[..]], "c": num,
//            "gamma": [..], "m": [{"w": num, "xi": [..]}], "mu": [[{"w": .., "xi": ..}]]}
//
// Omitted parameter fields are zero. A complex scalar is a number or [re, im].

#include "affinekit/params.hpp"

#include "json.hpp"

namespace affinekit::json_io {

using nlohmann::json;

StateSpace space_from_json(const json& j);
json space_to_json(const StateSpace& space);

AffineParams params_from_json(const json& j, const StateSpace& space);
json params_to_json(const AffineParams& p);

/// {"preset": name} optionally with a matching "space", or {"space": .., "params": ..}.
AffineParams process_from_json(const json& doc);

Complex complex_from_json(const json& j);
json complex_to_json(Complex z);
ComplexVector complex_vector_from_json(const json& j);
json complex_vector_to_json(const ComplexVector& v);
RealVector real_vector_from_json(const json& j);
json real_vector_to_json(const RealVector& v);

}  // namespace affinekit::json_io
