#include "shellflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shellflow/errors.hpp"

namespace shellflow {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

double number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path + "." + key + ": not finite");
  return d;
}

double number_or(const json& j, const std::string& key, const std::string& path, double def) {
  return j.contains(key) ? number(j, key, path) : def;
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ConfigError(path + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

int integer_or(const json& j, const std::string& key, const std::string& path, int def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ConfigError(path + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Scenario parse_physics(const json& j, bool nondim) {
  const std::string p = "scenario";
  if (!j.is_object()) throw ConfigError("scenario: expected an object");
  Scenario s;
  const std::string in = text(j, "interaction", p);
  if (in == "em")
    s.interaction = Interaction::EM;
  else if (in == "gravity")
    s.interaction = Interaction::Gravity;
  else
    throw ConfigError("scenario.interaction: expected \"em\" or \"gravity\"");
  const std::string sy = text(j, "symmetry", p);
  if (sy == "sphere")
    s.symmetry = Symmetry::Sphere;
  else if (sy == "cylinder")
    s.symmetry = Symmetry::Cylinder;
  else
    throw ConfigError("scenario.symmetry: expected \"sphere\" or \"cylinder\"");
  const std::string rg = j.contains("regime") ? text(j, "regime", p) : "relativistic";
  if (rg == "relativistic" || rg == "rel")
    s.regime = Regime::Relativistic;
  else if (rg == "classical")
    s.regime = Regime::Classical;
  else
    throw ConfigError("scenario.regime: expected \"relativistic\" or \"classical\"");

  if (nondim) {
    s.q = number_or(j, "q", p, 1.0);
    s.m = number_or(j, "m", p, 1.0);
    s.c = number_or(j, "c", p, 1.0);
    s.eps0 = number_or(j, "eps0", p, 1.0);
    s.G = number_or(j, "G", p, 1.0);
    s.ell = number_or(j, "ell", p, 1.0);
  } else {
    // SI mode: every constant the physics uses must be given.
    const bool em = s.interaction == Interaction::EM;
    s.m = number(j, "m", p);
    s.c = number(j, "c", p);
    s.q = em ? number(j, "q", p) : number_or(j, "q", p, 1.0);
    s.eps0 = em ? number(j, "eps0", p) : number_or(j, "eps0", p, 1.0);
    s.G = em ? number_or(j, "G", p, 1.0) : number(j, "G", p);
    s.ell = s.symmetry == Symmetry::Cylinder ? number(j, "ell", p) : number_or(j, "ell", p, 1.0);
  }
  s.validate();
  return s;
}

InitialProfile parse_profile(const json& j) {
  const std::string p = "profile";
  if (!j.is_object()) throw ConfigError("profile: expected an object");
  const std::string type = text(j, "type", p);
  if (type == "uniform") return InitialProfile(Uniform{number(j, "rho0", p), number(j, "r_max", p)});
  if (type == "lognormal")
    return InitialProfile(LogNormalShell{number(j, "f0", p), number(j, "tau", p),
                                         number(j, "mu_r", p), number(j, "sigma_r", p)});
  if (type == "tabulated")
    return InitialProfile(Tabulated{numbers(j, "r", p), numbers(j, "rho", p),
                                    number_or(j, "r_max", p, 0.0)});
  throw ConfigError("profile.type: expected uniform, lognormal or tabulated");
}

RunConfig parse_run(const json& j) {
  RunConfig rc;
  if (j.is_null()) return rc;
  if (!j.is_object()) throw ConfigError("run: expected an object");
  const std::string p = "run";
  rc.t_max = number_or(j, "t_max", p, rc.t_max);
  rc.n_layers = integer_or(j, "n_layers", p, rc.n_layers);
  rc.n_time_samples = integer_or(j, "n_time_samples", p, rc.n_time_samples);
  rc.verify_layers = integer_or(j, "verify_layers", p, rc.verify_layers);
  rc.hbar = number_or(j, "hbar", p, rc.hbar);
  if (j.contains("t_snapshot")) rc.t_snapshot = number(j, "t_snapshot", p);
  if (j.contains("nondimensionalize")) {
    if (!j.at("nondimensionalize").is_boolean())
      throw ConfigError("run.nondimensionalize: expected a boolean");
    rc.nondimensionalize = j.at("nondimensionalize").get<bool>();
  }
  if (j.contains("r_grid")) {
    const json& g = j.at("r_grid");
    if (g.contains("spacing")) rc.r_grid.spacing = text(g, "spacing", "run.r_grid");
    if (rc.r_grid.spacing != "geometric" && rc.r_grid.spacing != "linear")
      throw ConfigError("run.r_grid.spacing: expected geometric or linear");
    if (g.contains("r_min")) rc.r_grid.r_min = number(g, "r_min", "run.r_grid");
    if (g.contains("r_max")) rc.r_grid.r_max = number(g, "r_max", "run.r_grid");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    const std::string tp = "run.tolerances";
    rc.tolerances.quadrature = number_or(t, "quadrature", tp, rc.tolerances.quadrature);
    rc.tolerances.ode = number_or(t, "ode", tp, rc.tolerances.ode);
    rc.tolerances.verify_ode = number_or(t, "verify_ode", tp, rc.tolerances.verify_ode);
    rc.tolerances.verify_quadrature =
        number_or(t, "verify_quadrature", tp, rc.tolerances.verify_quadrature);
  }
  if (j.contains("outputs")) {
    for (const auto& [k, v] : j.at("outputs").items()) {
      if (!v.is_string()) throw ConfigError("run.outputs." + k + ": expected a path string");
      rc.outputs[k] = v.get<std::string>();
    }
  }
  if (!(rc.t_max > 0.0)) throw ConfigError("run.t_max: must be > 0");
  if (rc.n_layers < 2) throw ConfigError("run.n_layers: must be >= 2");
  if (rc.n_time_samples < 1) throw ConfigError("run.n_time_samples: must be >= 1");
  if (rc.verify_layers < 1) throw ConfigError("run.verify_layers: must be >= 1");
  for (double tol : {rc.tolerances.quadrature, rc.tolerances.ode, rc.tolerances.verify_ode,
                     rc.tolerances.verify_quadrature})
    if (!(tol > 0.0)) throw ConfigError("run.tolerances: all tolerances must be > 0");
  return rc;
}

}  // namespace

std::vector<double> ScenarioFile::layer_grid() const {
  const auto [lo0, hi0] = profile.support();
  const double lo = run.r_grid.r_min.value_or(lo0);
  const double hi = run.r_grid.r_max.value_or(hi0);
  if (!(lo > 0.0 && hi > lo)) throw ConfigError("run.r_grid: need 0 < r_min < r_max");
  const int n = run.n_layers;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    g[static_cast<std::size_t>(i)] =
        run.r_grid.spacing == "linear" ? lo + (hi - lo) * u : lo * std::exp(std::log(hi / lo) * u);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

ScenarioFile parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scenario file: expected a JSON object");
  if (!doc.contains("scenario")) throw ConfigError("scenario: missing");
  if (!doc.contains("profile")) throw ConfigError("profile: missing");
  ScenarioFile sf;
  sf.run = parse_run(doc.contains("run") ? doc.at("run") : json());
  sf.scenario = parse_physics(doc.at("scenario"), sf.run.nondimensionalize);
  sf.profile = parse_profile(doc.at("profile"));
  return sf;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_schema() {
  auto num = [] { return ojson{{"type", "number"}}; };
  auto pos = [] { return ojson{{"type", "number"}, {"exclusiveMinimum", 0}}; };
  ojson scenario = {
      {"type", "object"},
      {"required", {"interaction", "symmetry"}},
      {"properties",
       {{"interaction", {{"enum", {"em", "gravity"}}}},
        {"symmetry", {{"enum", {"sphere", "cylinder"}}}},
        {"regime", {{"enum", {"relativistic", "classical"}}, {"default", "relativistic"}}},
        {"q", num()},
        {"m", pos()},
        {"c", pos()},
        {"eps0", pos()},
        {"G", pos()},
        {"ell", pos()}}}};
  ojson profile = {
      {"oneOf",
       {{{"type", "object"},
         {"required", {"type", "rho0", "r_max"}},
         {"properties", {{"type", {{"const", "uniform"}}}, {"rho0", num()}, {"r_max", pos()}}}},
        {{"type", "object"},
         {"required", {"type", "f0", "tau", "mu_r", "sigma_r"}},
         {"properties",
          {{"type", {{"const", "lognormal"}}},
           {"f0", num()},
           {"tau", pos()},
           {"mu_r", num()},
           {"sigma_r", pos()}}}},
        {{"type", "object"},
         {"required", {"type", "r", "rho"}},
         {"properties",
          {{"type", {{"const", "tabulated"}}},
           {"r", {{"type", "array"}, {"items", num()}}},
           {"rho", {{"type", "array"}, {"items", num()}}},
           {"r_max", num()}}}}}}};
  ojson run = {
      {"type", "object"},
      {"properties",
       {{"t_max", pos()},
        {"n_layers", {{"type", "integer"}, {"minimum", 2}}},
        {"n_time_samples", {{"type", "integer"}, {"minimum", 1}}},
        {"verify_layers", {{"type", "integer"}, {"minimum", 1}}},
        {"t_snapshot", num()},
        {"hbar", pos()},
        {"nondimensionalize", {{"type", "boolean"}, {"default", true}}},
        {"r_grid",
         {{"type", "object"},
          {"properties",
           {{"spacing", {{"enum", {"geometric", "linear"}}}}, {"r_min", pos()}, {"r_max", pos()}}}}},
        {"tolerances",
         {{"type", "object"},
          {"properties",
           {{"quadrature", pos()}, {"ode", pos()}, {"verify_ode", pos()}, {"verify_quadrature", pos()}}}}},
        {"outputs", {{"type", "object"}, {"additionalProperties", {{"type", "string"}}}}}}}};
  ojson schema = {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
                  {"title", "shellflow scenario"},
                  {"type", "object"},
                  {"required", {"scenario", "profile"}},
                  {"properties", {{"scenario", scenario}, {"profile", profile}, {"run", run}}}};
  return schema.dump(2);
}

}  // namespace shellflow
