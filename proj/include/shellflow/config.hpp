#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shellflow/model.hpp"

namespace shellflow {

struct GridSpec {
  std::string spacing = "geometric";  ///< geometric | linear
  std::optional<double> r_min;
  std::optional<double> r_max;
};

struct Tolerances {
  double quadrature = 1e-11;
  double ode = 1e-10;
  double verify_ode = 1e-6;
  double verify_quadrature = 1e-9;
};

struct RunConfig {
  double t_max = 10.0;
  int n_layers = 64;
  int n_time_samples = 50;
  GridSpec r_grid;
  Tolerances tolerances;
  std::map<std::string, std::string> outputs;
  bool nondimensionalize = true;
  std::optional<double> t_snapshot;
  double hbar = 1.0;
  int verify_layers = 3;
};

struct ScenarioFile {
  Scenario scenario;
  InitialProfile profile;
  RunConfig run;

  Model model() const { return Model(scenario, profile); }
  std::vector<double> layer_grid() const;
};

/// Parses a scenario document; throws ConfigError with a field path on failure.
ScenarioFile parse_scenario(const std::string& json_text);
ScenarioFile load_scenario_file(const std::string& path);
/// JSON schema of the scenario document, pretty-printed.
std::string scenario_schema();

}  // namespace shellflow
