#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "molt/core.hpp"
#include "molt/geometry.hpp"

namespace molt {

/// Names accepted by the scenario key.
const std::vector<std::string>& scenario_names();
/// One-line description of a scenario.
std::string scenario_description(const std::string& name);

struct RunConfig {
  std::string scenario;
  double radius = 0.0;    ///< 0 selects the scenario default
  double gamma = 0.2;
  double aperture = 0.1;
  double period = 1.0;
  double ly = 1.0;
  std::size_t nx = 0;     ///< 0 selects the scenario default
  std::size_t ny = 0;
  double c = 1.0;
  double cfl = 2.0;
  double beta = 2.0;
  double epsilon = 0.0;
  Variant variant = Variant::dispersive;
  bool variant_set = false;
  std::string bc;         ///< dirichlet, neumann, periodic, outflow, embedded_dirichlet, embedded_neumann
  std::array<EdgeBc, 4> edges{EdgeBc::dirichlet, EdgeBc::dirichlet, EdgeBc::dirichlet, EdgeBc::dirichlet};
  double t_final = 0.0;   ///< 0 selects the scenario default
  std::vector<double> snapshot_times;
  std::string output_dir = "out";
  double tol = 1e-15;
  std::size_t max_iter = 200;
  bool averaging = false;
  bool correction = true;

  bool is_1d() const { return scenario == "sine_1d" || scenario == "outflow_1d"; }
  bool embedded_neumann() const { return bc == "embedded_neumann"; }
};

/// Parses "key = value" lines ('#' starts a comment) and validates the result.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace molt
