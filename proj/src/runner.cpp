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

#include "affinekit/runner.hpp"

#include "affinekit/errors.hpp"
#include "affinekit/json_io.hpp"
#include "affinekit/simulate.hpp"
#include "affinekit/transform.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>

namespace affinekit {

using nlohmann::json;

namespace {

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> table = {
      {"semiflow", "semi-flow: phi(t+s,u) = phi(t,u) + phi(s,psi(t,u)), psi(t+s,u) = psi(s,psi(t,u))"},
      {"regularity", "regularity: F(u) = d/dt phi(t,u) and R(u) = d/dt psi(t,u) at t = 0+"},
      {"bounded", "boundedness of (|phi(t,u)| + |psi(t,u) - u|) / t as t -> 0 on compacts of U_l"},
      {"cp_limit", "compound-Poisson limit: (E_x[exp<u,X_t - x>] - P_x(alive)) / t -> F~(u) + <x,R~(u)>"},
      {"levy_structure", "Levy-Khintchine form of F(u) + <x,R(u)> and admissibility of A(x), nu(x,.), killing"},
      {"affine_mc", "affine transform formula: E_x[exp<u,X_t>] = exp(phi(t,u) + <x,psi(t,u)>)"},
      {"martingale", "martingale property: E[L(n, delta, u)] = 1, stopped and unstopped"},
      {"characteristics", "absolutely continuous characteristics: [X]_t = int A(X_s) ds, drift int B(X_s) ds"},
  };
  return table;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected a list of numbers");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(what + ": expected a list of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

std::vector<ComplexVector> default_u_grid(const StateSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  const Complex I(0.0, 1.0);
  std::vector<ComplexVector> grid;
  grid.push_back(I * RealVector::Unit(d, 0).cast<Complex>());
  grid.push_back(0.5 * I * RealVector::Ones(d).cast<Complex>());
  ComplexVector alt(d);
  for (Eigen::Index i = 0; i < d; ++i) alt[i] = I * (i % 2 == 0 ? 0.8 : -0.6);
  grid.push_back(alt);

  if (space.kind() == SpaceKind::Parabola) {
    grid.push_back((ComplexVector(2) << 0.5, -1.0).finished());
    grid.push_back((ComplexVector(2) << 0.0, -1.0).finished());
    grid.push_back((ComplexVector(2) << Complex(1.0, 0.5), Complex(-0.5, 0.2)).finished());
  } else if (space.nonnegative_count() > 0) {
    ComplexVector a(d), b(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const bool nonneg = static_cast<std::size_t>(i) < space.nonnegative_count();
      a[i] = nonneg ? Complex(-0.5, 0.3) : Complex(0.0, 0.4);
      b[i] = nonneg ? Complex(-1.0, 0.0) : Complex(0.0, 0.0);
    }
    grid.push_back(a);
    grid.push_back(b);
  }
  return grid;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json check_entry(const std::string& name, double statistic, double threshold, bool pass, json details) {
  return json{{"check", name},           {"anchor", anchors().at(name)}, {"statistic", statistic},
              {"threshold", threshold},  {"pass", pass},                 {"details", std::move(details)}};
}

json failed_entry(const std::string& name, const std::string& error) {
  return json{{"check", name}, {"anchor", anchors().at(name)}, {"statistic", nullptr},
              {"threshold", nullptr}, {"pass", false}, {"error", error}};
}

// ---------------------------------------------------------------------------
// individual checks

class Verifier {
 public:
  explicit Verifier(const RunConfig& c) : c_(c), p_(c.params) {}

  json run(const std::string& name) {
    try {
      if (name == "semiflow") return semiflow();
      if (name == "regularity") return regularity();
      if (name == "bounded") return bounded();
      if (name == "cp_limit") return cp_limit();
      if (name == "levy_structure") return levy_structure();
      if (name == "affine_mc") return affine_mc();
      if (name == "martingale") return martingale();
      if (name == "characteristics") return characteristics();
    } catch (const Error& e) {
      return failed_entry(name, e.what());
    }
    throw ConfigError("unknown check '" + name + "'");
  }

 private:
  json semiflow() {
    double worst = 0.0;
    std::size_t triples = 0;
    for (const auto& u : c_.u_grid)
      for (double t : c_.t_grid)
        for (double s : c_.t_grid) {
          worst = std::max(worst, semiflow_residual(p_, t, s, u, c_.tol.ode));
          ++triples;
        }
    return check_entry("semiflow", worst, c_.tol.semiflow, worst <= c_.tol.semiflow,
                       {{"triples", triples}, {"ode_tol", c_.tol.ode}});
  }

  json regularity() {
    double worst_err = 0.0;
    double worst_order = kInfinity;
    json rows = json::array();
    for (const auto& u : c_.u_grid) {
      const FdRegularity fd = fd_regularity(p_, u, c_.tol.h_list);
      worst_err = std::max(worst_err, fd.richardson_error);
      worst_order = std::min(worst_order, fd.observed_order);
      rows.push_back({{"u", json_io::complex_vector_to_json(u)},
                      {"richardson_error", fd.richardson_error},
                      {"observed_order", std::isinf(fd.observed_order) ? json("exact") : json(fd.observed_order)}});
    }
    const bool pass = worst_err <= c_.tol.regularity && worst_order >= c_.tol.order;
    return check_entry("regularity", worst_err, c_.tol.regularity, pass,
                       {{"min_order", std::isinf(worst_order) ? json("exact") : json(worst_order)},
                        {"order_threshold", c_.tol.order},
                        {"points", rows}});
  }

  json bounded() {
    const BoundednessTable table = boundedness_probe(p_, c_.u_grid, c_.tol.bounded_t);
    const bool pass = !table.divergence_suspected && table.late_variation < c_.tol.bounded_variation;
    return check_entry("bounded", table.late_variation, c_.tol.bounded_variation, pass,
                       {{"t", table.t}, {"sup", table.sup}, {"divergence_suspected", table.divergence_suspected}});
  }

  json cp_limit() {
    double worst = 1.0;
    bool pass = true;
    json rows = json::array();
    for (const auto& x : c_.x_grid)
      for (const auto& u : c_.u_grid) {
        const CpLimitTable table = cp_limit_check(p_, x, u, c_.tol.cp_t);
        const bool ok = table.exact || table.log_correlation >= c_.tol.cp_correlation;
        if (!table.exact) worst = std::min(worst, table.log_correlation);
        pass = pass && ok;
        rows.push_back({{"x", json_io::real_vector_to_json(x)},
                        {"u", json_io::complex_vector_to_json(u)},
                        {"fitted_C", table.fitted_C},
                        {"log_slope", table.log_slope},
                        {"log_correlation", table.log_correlation},
                        {"exact", table.exact},
                        {"pass", ok}});
      }
    return check_entry("cp_limit", worst, c_.tol.cp_correlation, pass, {{"pairs", rows}});
  }

  json levy_structure() {
    const ValidationReport report = validate(p_);
    auto points = p_.space().affine_basis();
    for (auto& x : p_.space().sample(16, 5.0)) points.push_back(std::move(x));

    std::vector<ComplexVector> imaginary;
    const auto d = static_cast<Eigen::Index>(p_.dim());
    for (std::size_t k = 1; k <= 100; ++k) {
      RealVector y(d);
      for (Eigen::Index i = 0; i < d; ++i) y[i] = 4.0 * (2.0 * halton(k, i == 0 ? 2u : (i == 1 ? 3u : 5u)) - 1.0);
      imaginary.push_back(Complex(0.0, 1.0) * y.cast<Complex>());
    }

    double lk_defect = 0.0;
    double re_excess = -kInfinity;
    const ComplexVector zero = ComplexVector::Zero(d);
    for (const auto& x : points) {
      const Characteristics ch = p_.characteristics_unchecked(x);
      for (const auto& u : c_.u_grid) {
        const Complex lhs = p_.exponent(u, x);
        const Complex rhs = ch.exponent(u);
        const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
        lk_defect = std::max(lk_defect, std::abs(lhs - rhs) / scale);
      }
      const double at_zero = p_.exponent(zero, x).real();
      for (const auto& u : imaginary) re_excess = std::max(re_excess, p_.exponent(u, x).real() - at_zero);
    }
    const bool pass = report.valid && lk_defect <= 1e-12 && re_excess <= 1e-12;
    json violations = json::array();
    for (const auto& v : report.violations) violations.push_back(v.message);
    return check_entry("levy_structure", lk_defect, 1e-12, pass,
                       {{"admissible", report.valid},
                        {"violations", violations},
                        {"max_re_excess_over_zero", re_excess},
                        {"notes", report.notes}});
  }

  const Ensemble& ensemble() {
    if (!ensemble_) ensemble_ = simulate_ensemble(p_, x0(), c_.mc.T, c_.mc.steps, c_.mc.paths, c_.mc.seed);
    return *ensemble_;
  }

  RealVector x0() const {
    if (c_.mc.x0) return *c_.mc.x0;
    const auto basis = p_.space().affine_basis();
    return basis.size() > 1 ? basis[1] : basis[0];
  }

  json affine_mc() {
    std::vector<std::pair<double, ComplexVector>> points;
    std::vector<double> off_grid;
    for (double t : c_.t_grid) {
      if (!(t > 0.0) || t > c_.mc.T) continue;
      try {
        ensemble().grid_index(t);
      } catch (const DomainError&) {
        off_grid.push_back(t);
        continue;
      }
      for (const auto& u : c_.u_grid) points.emplace_back(t, u);
    }
    const auto rows = affine_property_check(p_, ensemble(), x0(), points, c_.tol.ode);
    bool pass = true;
    double worst = 0.0;
    json details = json::array();
    for (const auto& r : rows) {
      pass = pass && r.pass;
      worst = std::max(worst, r.mc.std_error > 0 ? r.deviation / r.mc.std_error : (r.deviation > 0 ? kInfinity : 0.0));
      details.push_back({{"t", r.t},
                         {"u", json_io::complex_vector_to_json(r.u)},
                         {"mc", json_io::complex_to_json(r.mc.value)},
                         {"std_error", r.mc.std_error},
                         {"exact", json_io::complex_to_json(r.exact)},
                         {"pass", r.pass}});
    }
    return check_entry("affine_mc", worst, 3.0, pass,
                       {{"statistic_unit", "deviation / std_error"},
                        {"paths", c_.mc.paths},
                        {"skipped_off_grid_t", off_grid},
                        {"points", details}});
  }

  json martingale() {
    const Ensemble& ens = ensemble();
    const double dt = (*ens.times)[1] - (*ens.times)[0];
    const auto stride = static_cast<std::size_t>(std::llround(c_.mc.delta / dt));
    const Ensemble stopped = stopped_ensemble(ens, c_.mc.stop_radius, std::max<std::size_t>(stride, 1));
    bool pass = true;
    double worst = 0.0;
    json rows = json::array();
    for (const auto& u : c_.u_grid) {
      for (const bool stop : {false, true}) {
        const MartingaleTest m = martingale_L_test(p_, stop ? stopped : ens, c_.mc.delta, c_.mc.n, u, c_.tol.ode);
        pass = pass && m.pass;
        worst = std::max(worst, m.threshold > 0 ? m.deviation / m.threshold : 0.0);
        rows.push_back({{"u", json_io::complex_vector_to_json(u)},
                        {"stopped", stop},
                        {"mean", json_io::complex_to_json(m.estimate.value)},
                        {"std_error", m.estimate.std_error},
                        {"pass", m.pass}});
      }
    }
    return check_entry("martingale", worst, 1.0, pass,
                       {{"statistic_unit", "|mean - 1| / max(3 SE, tol)"},
                        {"delta", c_.mc.delta},
                        {"n", c_.mc.n},
                        {"stop_radius", c_.mc.stop_radius},
                        {"rows", rows}});
  }

  json characteristics() {
    if (p_.has_jumps() || p_.has_killing())
      return json{{"check", "characteristics"}, {"anchor", anchors().at("characteristics")},
                  {"statistic", nullptr}, {"threshold", c_.tol.qv_rel}, {"pass", true},
                  {"skipped", "requires a killing-free diffusion without jumps"}};
    const CharacteristicsReport rep = characteristics_check(ensemble(), p_);
    const bool pass = rep.ensemble_rel_error <= c_.tol.qv_rel && rep.drift_pass;
    return check_entry("characteristics", rep.ensemble_rel_error, c_.tol.qv_rel, pass,
                       {{"mean_path_rel_error", rep.mean_path_rel_error},
                        {"drift_mean", json_io::real_vector_to_json(rep.drift_mean)},
                        {"drift_se", json_io::real_vector_to_json(rep.drift_se)},
                        {"drift_pass", rep.drift_pass},
                        {"paths_used", rep.paths_used}});
  }

  const RunConfig& c_;
  const AffineParams& p_;
  std::optional<Ensemble> ensemble_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
}

}  // namespace

Task task_from_string(const std::string& name) {
  if (name == "transform") return Task::Transform;
  if (name == "simulate") return Task::Simulate;
  if (name == "verify") return Task::Verify;
  throw ConfigError("unknown task '" + name + "' (expected transform, simulate or verify)");
}

std::string to_string(Task task) {
  switch (task) {
    case Task::Transform: return "transform";
    case Task::Simulate: return "simulate";
    case Task::Verify: return "verify";
  }
  return "unknown";
}

std::vector<std::string> all_checks() {
  return {"semiflow", "regularity", "bounded", "cp_limit", "levy_structure", "affine_mc", "martingale",
          "characteristics"};
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c{json_io::process_from_json(doc), "custom", std::nullopt, {}, {}, false, {}, {}, {}, {}};
  if (doc.contains("preset")) c.label = doc["preset"].get<std::string>();
  const std::size_t d = c.params.dim();

  if (doc.contains("task")) {
    if (!doc["task"].is_string()) throw ConfigError("task: expected a string");
    c.task = task_from_string(doc["task"].get<std::string>());
  }

  c.verify_suite = all_checks();
  if (doc.contains("verify_suite")) {
    const json& s = doc["verify_suite"];
    if (s.is_string() && s.get<std::string>() == "all") {
    } else if (s.is_array()) {
      c.verify_suite.clear();
      const auto known = all_checks();
      for (const auto& e : s) {
        if (!e.is_string() || std::find(known.begin(), known.end(), e.get<std::string>()) == known.end())
          throw ConfigError("verify_suite: unknown check " + e.dump());
        c.verify_suite.push_back(e.get<std::string>());
      }
    } else {
      throw ConfigError("verify_suite: expected \"all\" or a list of checks");
    }
  }

  const json grids = doc.value("grids", json::object());
  c.t_grid = grids.contains("t") ? numbers(grids["t"], "grids.t") : std::vector<double>{0.1, 0.25, 0.5, 1.0};
  c.explicit_t_grid = grids.contains("t");
  std::sort(c.t_grid.begin(), c.t_grid.end());
  if (c.t_grid.empty()) throw ConfigError("grids.t: empty");
  if (grids.contains("u")) {
    if (!grids["u"].is_array()) throw ConfigError("grids.u: expected a list of vectors");
    for (const auto& u : grids["u"]) {
      ComplexVector v = json_io::complex_vector_from_json(u);
      if (static_cast<std::size_t>(v.size()) != d) throw ConfigError("grids.u: entries must have length " + std::to_string(d));
      c.u_grid.push_back(std::move(v));
    }
  } else {
    c.u_grid = default_u_grid(c.params.space());
  }
  if (grids.contains("x")) {
    if (!grids["x"].is_array()) throw ConfigError("grids.x: expected a list of vectors");
    for (const auto& x : grids["x"]) {
      RealVector v = json_io::real_vector_from_json(x);
      if (static_cast<std::size_t>(v.size()) != d) throw ConfigError("grids.x: entries must have length " + std::to_string(d));
      c.x_grid.push_back(std::move(v));
    }
  } else {
    c.x_grid = c.params.space().affine_basis();
  }

  c.mc.T = c.t_grid.back() > 0.0 ? c.t_grid.back() : 1.0;
  if (doc.contains("mc")) {
    const json& m = doc["mc"];
    if (!m.is_object()) throw ConfigError("mc: expected an object");
    const auto get_count = [&](const char* key, std::size_t& out) {
      if (!m.contains(key)) return;
      if (!m[key].is_number_integer() || m[key].get<long long>() < 0)
        throw ConfigError(std::string("mc.") + key + ": expected a nonnegative integer");
      out = m[key].get<std::size_t>();
    };
    const auto get_number = [&](const char* key, double& out) {
      if (!m.contains(key)) return;
      if (!m[key].is_number()) throw ConfigError(std::string("mc.") + key + ": expected a number");
      out = m[key].get<double>();
    };
    get_count("paths", c.mc.paths);
    get_count("steps", c.mc.steps);
    get_count("n", c.mc.n);
    get_number("T", c.mc.T);
    get_number("delta", c.mc.delta);
    get_number("stop_radius", c.mc.stop_radius);
    if (m.contains("seed")) {
      if (!m["seed"].is_number_unsigned()) throw ConfigError("mc.seed: expected a nonnegative integer");
      c.mc.seed = m["seed"].get<std::uint64_t>();
    }
    if (m.contains("x0")) {
      c.mc.x0 = json_io::real_vector_from_json(m["x0"]);
      if (static_cast<std::size_t>(c.mc.x0->size()) != d) throw ConfigError("mc.x0: expected length " + std::to_string(d));
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    const auto get = [&](const char* key, double& out) {
      if (!t.contains(key)) return;
      if (!t[key].is_number()) throw ConfigError(std::string("tolerances.") + key + ": expected a number");
      out = t[key].get<double>();
    };
    get("ode", c.tol.ode);
    get("semiflow", c.tol.semiflow);
    get("regularity", c.tol.regularity);
    get("order", c.tol.order);
    get("bounded_variation", c.tol.bounded_variation);
    get("cp_correlation", c.tol.cp_correlation);
    get("qv_rel", c.tol.qv_rel);
    if (t.contains("h_list")) c.tol.h_list = numbers(t["h_list"], "tolerances.h_list");
    if (t.contains("bounded_t")) c.tol.bounded_t = numbers(t["bounded_t"], "tolerances.bounded_t");
    if (t.contains("cp_t")) c.tol.cp_t = numbers(t["cp_t"], "tolerances.cp_t");
  }
  return c;
}

void check_config(const RunConfig& c) {
  const StateSpace& space = c.params.space();
  for (const auto& u : c.u_grid)
    if (!space.in_domain(u)) {
      std::string s = "(";
      for (Eigen::Index i = 0; i < u.size(); ++i)
        s += (i ? ", " : "") + format_double(u[i].real()) + (u[i].imag() < 0 ? "" : "+") + format_double(u[i].imag()) + "i";
      throw DomainError("grid u = " + s + ") is not in U: support() = inf on " + space.describe());
    }
  for (const auto& x : c.x_grid)
    if (!space.contains(x)) throw DomainError("grid x is not in D (" + space.describe() + ")");
  for (double t : c.t_grid)
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("grids.t: times must be finite and >= 0");
  if (!(c.tol.ode > 0.0)) throw DomainError("tolerances.ode must be positive");

  if (space.kind() != SpaceKind::Parabola) {
    const ValidationReport report = validate(c.params);
    if (!report.valid) throw AdmissibilityError("parameters rejected: " + report.violations.front().message);
  }
  if (c.mc.paths < 2) throw DomainError("mc.paths must be at least 2");
  if (c.mc.steps == 0 || !(c.mc.T > 0.0)) throw DomainError("mc.steps and mc.T must be positive");
  if (c.mc.x0 && !space.contains(*c.mc.x0)) throw DomainError("mc.x0 is not in D");
  if (!(c.mc.stop_radius >= 0.0)) throw DomainError("mc.stop_radius must be >= 0");

  const bool wants_mc = std::any_of(c.verify_suite.begin(), c.verify_suite.end(), [](const std::string& s) {
    return s == "affine_mc" || s == "martingale" || s == "characteristics";
  });
  if (wants_mc && (!c.task || *c.task == Task::Verify)) {
    const double dt = c.mc.T / static_cast<double>(c.mc.steps);
    const auto on_grid = [&](double t) {
      const double k = t / dt;
      return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
    };
    for (double t : c.t_grid)
      if (c.explicit_t_grid && t <= c.mc.T && !on_grid(t))
        throw DomainError("grids.t value " + format_double(t) + " is not on the simulation grid (dt = " +
                          format_double(dt) + ")");
    if (!on_grid(c.mc.delta) || c.mc.delta <= 0.0)
      throw DomainError("mc.delta is not a positive multiple of the simulation step");
    if (static_cast<double>(c.mc.n) * c.mc.delta > c.mc.T * (1.0 + 1e-12))
      throw DomainError("mc.n * mc.delta exceeds mc.T");
  }
}

RunOutcome run(const RunConfig& c, Task task, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunOutcome out;
  const auto d = static_cast<Eigen::Index>(c.params.dim());

  if (task == Task::Transform) {
    std::string csv = "t";
    for (const char* part : {"re_u", "im_u"})
      for (Eigen::Index i = 0; i < d; ++i) csv += "," + std::string(part) + std::to_string(i + 1);
    csv += ",re_phi,im_phi";
    for (const char* part : {"re_psi", "im_psi"})
      for (Eigen::Index i = 0; i < d; ++i) csv += "," + std::string(part) + std::to_string(i + 1);
    csv += ",status\n";
    TransformOptions opt;
    opt.tol = c.tol.ode;
    std::size_t failures = 0;
    for (const auto& u : c.u_grid) {
      for (const TransformResult& r : evaluate_grid(c.params, c.t_grid, u, opt)) {
        csv += format_double(r.t);
        for (Eigen::Index i = 0; i < d; ++i) csv += "," + format_double(u[i].real());
        for (Eigen::Index i = 0; i < d; ++i) csv += "," + format_double(u[i].imag());
        csv += "," + format_double(r.phi.real()) + "," + format_double(r.phi.imag());
        for (Eigen::Index i = 0; i < d; ++i) csv += "," + format_double(r.psi[i].real());
        for (Eigen::Index i = 0; i < d; ++i) csv += "," + format_double(r.psi[i].imag());
        csv += "," + to_string(r.status) + "\n";
        if (!r.ok()) ++failures;
      }
    }
    const auto path = out_dir / "transform.csv";
    write_text(path, csv);
    out.files.push_back(path);
    out.report = {{"task", "transform"}, {"rows", c.u_grid.size() * c.t_grid.size()}, {"not_ok", failures}};
    out.message = "wrote " + path.string();
    return out;
  }

  if (task == Task::Simulate) {
    const RealVector x0 = c.mc.x0 ? *c.mc.x0 : c.params.space().affine_basis()[std::min<std::size_t>(1, static_cast<std::size_t>(d))];
    const Ensemble ens = simulate_ensemble(c.params, x0, c.mc.T, c.mc.steps, c.mc.paths, c.mc.seed);
    const auto path = out_dir / "paths.csv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os << "path_id,t";
    for (Eigen::Index i = 0; i < d; ++i) os << ",x_" << (i + 1);
    os << ",alive\n";
    for (std::size_t id = 0; id < ens.paths.size(); ++id) {
      const PathSample& p = ens.paths[id];
      for (std::size_t k = 0; k < p.size(); ++k) {
        os << id << ',' << format_double((*ens.times)[k]);
        for (Eigen::Index i = 0; i < d; ++i) os << ',' << format_double(p.states(i, static_cast<Eigen::Index>(k)));
        os << ',' << (p.alive_at(k) ? 1 : 0) << '\n';
      }
    }
    out.files.push_back(path);
    out.report = {{"task", "simulate"}, {"paths", ens.paths.size()}, {"steps", c.mc.steps}};
    out.message = "wrote " + path.string();
    return out;
  }

  Verifier verifier(c);
  json checks = json::array();
  bool all_pass = true;
  for (const auto& name : c.verify_suite) {
    json entry = verifier.run(name);
    all_pass = all_pass && entry["pass"].get<bool>();
    checks.push_back(std::move(entry));
  }
  out.report = {{"process",
                 {{"label", c.label},
                  {"space", json_io::space_to_json(c.params.space())},
                  {"params", json_io::params_to_json(c.params)}}},
                {"settings",
                 {{"ode_tol", c.tol.ode},
                  {"paths", c.mc.paths},
                  {"steps", c.mc.steps},
                  {"T", c.mc.T},
                  {"seed", c.mc.seed}}},
                {"checks", checks},
                {"all_pass", all_pass},
                {kTimestampKey, timestamp()}};
  const auto path = out_dir / "report.json";
  write_text(path, out.report.dump(2) + "\n");
  out.files.push_back(path);
  out.exit_status = all_pass ? kExitOk : kExitCheckFailed;
  out.message = std::string(all_pass ? "all checks passed" : "some checks failed") + "; wrote " + path.string();
  return out;
}

RunOutcome run_document(const std::string& config_text, std::optional<Task> task,
                        const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
                        std::optional<double> tol) {
  RunOutcome out;
  std::optional<RunConfig> config;
  try {
    const json doc = json::parse(config_text);
    config.emplace(parse_config(doc));
    if (seed) config->mc.seed = *seed;
    if (tol) config->tol.ode = *tol;
    if (!task) task = config->task;
    if (!task) throw ConfigError("no task given on the command line or in the config");
    config->task = task;
  } catch (const json::exception& e) {
    out.exit_status = kExitParseError;
    out.message = std::string("parse error: ") + e.what();
    return out;
  } catch (const ConfigError& e) {
    out.exit_status = kExitParseError;
    out.message = std::string("config error: ") + e.what();
    return out;
  } catch (const DimensionError& e) {
    out.exit_status = kExitParseError;
    out.message = std::string("config error: ") + e.what();
    return out;
  } catch (const Error& e) {
    out.exit_status = kExitValidationError;
    out.message = std::string("validation error: ") + e.what();
    return out;
  }

  try {
    check_config(*config);
  } catch (const Error& e) {
    out.exit_status = kExitValidationError;
    out.message = std::string("validation error: ") + e.what();
    return out;
  }

  try {
    return run(*config, *task, out_dir);
  } catch (const std::exception& e) {
    out.exit_status = kExitCheckFailed;
    out.message = std::string("run failed: ") + e.what();
    return out;
  }
}

}  // namespace affinekit
