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

#include "affinekit/json_io.hpp"

#include "affinekit/errors.hpp"

namespace affinekit::json_io {

namespace {

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + ": expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ConfigError(what + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

RealMatrix matrix(const json& j, std::size_t d, const std::string& what) {
  if (!j.is_array() || j.size() != d) throw ConfigError(what + ": expected " + std::to_string(d) + " rows");
  const auto n = static_cast<Eigen::Index>(d);
  RealMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != d)
      throw ConfigError(what + ": expected " + std::to_string(d) + " columns");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

RealVector vector(const json& j, std::size_t d, const std::string& what) {
  RealVector v = real_vector_from_json(j);
  if (static_cast<std::size_t>(v.size()) != d)
    throw ConfigError(what + ": expected " + std::to_string(d) + " entries");
  return v;
}

LevyMeasure measure(const json& j, std::size_t d, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected a list of atoms");
  std::vector<Atom> atoms;
  for (const json& a : j) {
    if (!a.is_object() || !a.contains("w") || !a.contains("xi"))
      throw ConfigError(what + ": atoms are {\"w\": weight, \"xi\": [..]}");
    atoms.push_back({number(a["w"], what + ".w"), vector(a["xi"], d, what + ".xi")});
  }
  try {
    return LevyMeasure(std::move(atoms));
  } catch (const DomainError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

json measure_to_json(const LevyMeasure& m) {
  json out = json::array();
  for (const auto& a : m.atoms()) out.push_back({{"w", a.weight}, {"xi", real_vector_to_json(a.location)}});
  return out;
}

json matrix_to_json(const RealMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(real_vector_to_json(m.row(r).transpose()));
  return out;
}

}  // namespace

StateSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("space: expected {\"kind\": ...}");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "parabola") return StateSpace::parabola();
  if (kind == "halfline") return StateSpace::half_line();
  if (kind == "full") {
    const std::size_t d = j.contains("dim") ? count(j["dim"], "space.dim")
                          : j.contains("n") ? count(j["n"], "space.n")
                                            : 0;
    if (d == 0) throw ConfigError("space: full space needs a positive \"dim\"");
    return StateSpace::full_space(d);
  }
  if (kind == "orthant") {
    const std::size_t m = j.contains("m") ? count(j["m"], "space.m") : 0;
    const std::size_t n = j.contains("n") ? count(j["n"], "space.n") : 0;
    if (m + n == 0) throw ConfigError("space: orthant needs m + n >= 1");
    return StateSpace::orthant_plane(m, n);
  }
  throw ConfigError("space: unknown kind '" + kind + "' (expected orthant, parabola, full or halfline)");
}

json space_to_json(const StateSpace& space) {
  json j{{"kind", to_string(space.kind())}, {"dim", space.dim()}};
  if (space.kind() == SpaceKind::OrthantPlane) {
    j["m"] = space.nonnegative_count();
    j["n"] = space.free_count();
  }
  return j;
}

AffineParams params_from_json(const json& j, const StateSpace& space) {
  if (!j.is_object()) throw ConfigError("params: expected an object");
  const std::size_t d = space.dim();
  ParamData p = ParamData::zeros(d);
  if (j.contains("a")) p.a = matrix(j["a"], d, "params.a");
  if (j.contains("alpha")) {
    if (!j["alpha"].is_array() || j["alpha"].size() != d) throw ConfigError("params.alpha: expected d matrices");
    for (std::size_t i = 0; i < d; ++i) p.alpha[i] = matrix(j["alpha"][i], d, "params.alpha");
  }
  if (j.contains("b")) p.b = vector(j["b"], d, "params.b");
  if (j.contains("beta")) {
    if (!j["beta"].is_array() || j["beta"].size() != d) throw ConfigError("params.beta: expected d vectors");
    for (std::size_t i = 0; i < d; ++i) p.beta[i] = vector(j["beta"][i], d, "params.beta");
  }
  if (j.contains("c")) p.c = number(j["c"], "params.c");
  if (j.contains("gamma")) p.gamma = vector(j["gamma"], d, "params.gamma");
  if (j.contains("m")) p.m = measure(j["m"], d, "params.m");
  if (j.contains("mu")) {
    if (!j["mu"].is_array() || j["mu"].size() != d) throw ConfigError("params.mu: expected d measures");
    for (std::size_t i = 0; i < d; ++i) p.mu[i] = measure(j["mu"][i], d, "params.mu");
  }
  return AffineParams(space, std::move(p));
}

json params_to_json(const AffineParams& p) {
  const ParamData& d = p.data();
  json j;
  j["a"] = matrix_to_json(d.a);
  j["alpha"] = json::array();
  for (const auto& m : d.alpha) j["alpha"].push_back(matrix_to_json(m));
  j["b"] = real_vector_to_json(d.b);
  j["beta"] = json::array();
  for (const auto& v : d.beta) j["beta"].push_back(real_vector_to_json(v));
  j["c"] = d.c;
  j["gamma"] = real_vector_to_json(d.gamma);
  j["m"] = measure_to_json(d.m);
  j["mu"] = json::array();
  for (const auto& m : d.mu) j["mu"].push_back(measure_to_json(m));
  return j;
}

AffineParams process_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("process: expected a JSON object");
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError("preset: expected a name");
    AffineParams p = presets::by_name(doc["preset"].get<std::string>());
    if (doc.contains("space") && !(space_from_json(doc["space"]) == p.space()))
      throw ConfigError("space does not match preset '" + doc["preset"].get<std::string>() + "' (" +
                        p.space().describe() + ")");
    return p;
  }
  if (!doc.contains("space")) throw ConfigError("process: missing \"space\" (or \"preset\")");
  const StateSpace space = space_from_json(doc["space"]);
  return params_from_json(doc.contains("params") ? doc["params"] : json::object(), space);
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re") && j.contains("im"))
    return {number(j["re"], "re"), number(j["im"], "im")};
  throw ConfigError("expected a complex number: number or [re, im]");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

ComplexVector complex_vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a nonempty list of complex numbers");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

json complex_vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

RealVector real_vector_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("expected a list of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], "vector entry");
  return v;
}

json real_vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace affinekit::json_io
