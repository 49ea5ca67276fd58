#include "molt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "molt/errors.hpp"

namespace molt {

namespace {

struct ScenarioInfo {
  const char* name;
  const char* description;
};

constexpr ScenarioInfo kScenarios[] = {
    {"sine_1d", "1D standing wave sin(pi x) cos(pi c t) on [0,1] with Dirichlet ends"},
    {"outflow_1d", "1D Gaussian pulse leaving [0,1] through outflow ends"},
    {"double_circle", "double circle cavity with Dirichlet walls and cos^6 bumps"},
    {"bessel_dirichlet", "J0 standing mode in a Dirichlet drum"},
    {"quarter_circle", "J0 mode on the full Dirichlet drum and on its Neumann quarter"},
    {"bessel_neumann", "J0 mode in a disc with an embedded Neumann wall"},
    {"slit_grating", "periodic slit grating under an incident plane wave with outflow ends"},
    {"point_sources", "two off-grid point sources; Dirichlet left, outflow right, periodic top and bottom"},
    {"rectangle", "Gaussian bump in a rectangle with per-edge conditions"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidValue, key + ": not a number: '" + v + "'");
  }
  return x;
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x < 0.0 || x != std::floor(x) || x > 1e9) {
    throw Error(ErrorCode::InvalidValue, key + ": not a non-negative integer: '" + v + "'");
  }
  return static_cast<std::size_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::InvalidValue, key + ": not a boolean: '" + v + "'");
}

EdgeBc parse_edge(const std::string& key, const std::string& v) {
  if (v == "dirichlet") return EdgeBc::dirichlet;
  if (v == "neumann") return EdgeBc::neumann;
  if (v == "periodic") return EdgeBc::periodic;
  if (v == "outflow") return EdgeBc::outflow;
  throw Error(ErrorCode::InvalidValue, key + ": unknown edge condition '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

bool known_scenario(const std::string& s) {
  return std::any_of(std::begin(kScenarios), std::end(kScenarios), [&](const ScenarioInfo& i) { return s == i.name; });
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const ScenarioInfo& i : kScenarios) v.emplace_back(i.name);
    return v;
  }();
  return names;
}

std::string scenario_description(const std::string& name) {
  for (const ScenarioInfo& i : kScenarios) {
    if (name == i.name) return i.description;
  }
  throw Error(ErrorCode::InvalidValue, "unknown scenario '" + name + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool edges_set = false;
  std::stringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidValue, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "scenario") {
      cfg.scenario = v;
    } else if (key == "radius") {
      cfg.radius = parse_double(key, v);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(key, v);
    } else if (key == "aperture") {
      cfg.aperture = parse_double(key, v);
    } else if (key == "period") {
      cfg.period = parse_double(key, v);
    } else if (key == "ly") {
      cfg.ly = parse_double(key, v);
    } else if (key == "nx") {
      cfg.nx = parse_size(key, v);
    } else if (key == "ny") {
      cfg.ny = parse_size(key, v);
    } else if (key == "n") {
      cfg.nx = parse_size(key, v);
      cfg.ny = cfg.nx;
    } else if (key == "c") {
      cfg.c = parse_double(key, v);
    } else if (key == "cfl") {
      cfg.cfl = parse_double(key, v);
    } else if (key == "beta") {
      cfg.beta = parse_double(key, v);
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(key, v);
    } else if (key == "variant") {
      cfg.variant = variant_from_string(v);
      cfg.variant_set = true;
    } else if (key == "bc") {
      static const char* kinds[] = {"dirichlet", "neumann", "periodic", "outflow", "embedded_dirichlet",
                                    "embedded_neumann"};
      if (std::none_of(std::begin(kinds), std::end(kinds), [&](const char* k) { return v == k; })) {
        throw Error(ErrorCode::InvalidValue, "bc: unknown boundary condition '" + v + "'");
      }
      cfg.bc = v;
      if (v == "dirichlet" || v == "neumann" || v == "periodic" || v == "outflow") {
        const EdgeBc e = parse_edge(key, v);
        if (!edges_set) cfg.edges = {e, e, e, e};
      }
    } else if (key == "bc_left" || key == "bc_right" || key == "bc_bottom" || key == "bc_top") {
      const int idx = key == "bc_left" ? edge_left : key == "bc_right" ? edge_right : key == "bc_bottom" ? edge_bottom
                                                                                                          : edge_top;
      cfg.edges[idx] = parse_edge(key, v);
      edges_set = true;
    } else if (key == "t_final") {
      cfg.t_final = parse_double(key, v);
    } else if (key == "snapshot_times") {
      cfg.snapshot_times = parse_list(key, v);
    } else if (key == "output_dir") {
      cfg.output_dir = v;
    } else if (key == "tol") {
      cfg.tol = parse_double(key, v);
    } else if (key == "max_iter") {
      cfg.max_iter = parse_size(key, v);
    } else if (key == "averaging") {
      cfg.averaging = parse_bool(key, v);
    } else if (key == "correction") {
      cfg.correction = parse_bool(key, v);
    } else {
      throw Error(ErrorCode::UnknownKey, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }

  if (cfg.scenario == "bessel_neumann" && cfg.bc.empty()) cfg.bc = "embedded_neumann";
  if (cfg.embedded_neumann() && !cfg.variant_set && cfg.epsilon == 0.0) cfg.variant = Variant::diffusive;
  if (cfg.embedded_neumann() && cfg.variant == Variant::dispersive && cfg.epsilon == 0.0) {
    throw Error(ErrorCode::IncompatibleBC, "embedded Neumann needs the diffusive variant or epsilon > 0");
  }
  const bool outflow = cfg.scenario == "slit_grating" || cfg.scenario == "point_sources" ||
                       cfg.scenario == "outflow_1d" ||
                       (cfg.scenario == "rectangle" && std::count(cfg.edges.begin(), cfg.edges.end(), EdgeBc::outflow) > 0);
  if (outflow && cfg.variant == Variant::diffusive) {
    throw Error(ErrorCode::IncompatibleBC, "outflow closures need a centered variant");
  }
  if (cfg.scenario.empty()) throw Error(ErrorCode::MissingScenario, "no scenario given");
  if (!known_scenario(cfg.scenario)) throw Error(ErrorCode::InvalidValue, "unknown scenario '" + cfg.scenario + "'");
  if (cfg.scenario == "rectangle") {
    const auto& e = cfg.edges;
    if ((e[edge_left] == EdgeBc::periodic) != (e[edge_right] == EdgeBc::periodic) ||
        (e[edge_bottom] == EdgeBc::periodic) != (e[edge_top] == EdgeBc::periodic)) {
      throw Error(ErrorCode::IncompatibleBC, "periodic edges must come in opposite pairs");
    }
    const bool xo = e[edge_left] == EdgeBc::outflow || e[edge_right] == EdgeBc::outflow;
    const bool yo = e[edge_bottom] == EdgeBc::outflow || e[edge_top] == EdgeBc::outflow;
    if (xo && yo) throw Error(ErrorCode::IncompatibleBC, "outflow is supported along one axis only");
  }
  if (!(cfg.cfl > 0.0)) throw Error(ErrorCode::InvalidValue, "cfl must be positive");
  if (!(cfg.c > 0.0)) throw Error(ErrorCode::NonPositiveStep, "wave speed must be positive");
  if (cfg.epsilon < 0.0 || cfg.epsilon >= 1.0) throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1)");
  if (cfg.variant != Variant::diffusive) {
    const Variant v = cfg.epsilon > 0.0 ? Variant::dissipative : cfg.variant;
    if (cfg.beta <= 0.0 || cfg.beta > max_beta(v, cfg.epsilon) * (1.0 + 1e-14)) {
      throw Error(ErrorCode::BetaOutOfRange, "beta outside (0, " + std::to_string(max_beta(v, cfg.epsilon)) + "]");
    }
  }
  if (cfg.t_final < 0.0) throw Error(ErrorCode::InvalidValue, "t_final must be positive");
  if ((cfg.nx != 0 && cfg.nx < 4) || (cfg.ny != 0 && cfg.ny < 4)) {
    throw Error(ErrorCode::InvalidValue, "grids need at least 4 cells");
  }
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidValue, "tol must be positive");
  if (cfg.max_iter == 0) throw Error(ErrorCode::InvalidValue, "max_iter must be positive");
  if (cfg.output_dir.empty()) throw Error(ErrorCode::InvalidValue, "output_dir must not be empty");
  for (double t : cfg.snapshot_times) {
    if (t < 0.0 || (cfg.t_final > 0.0 && t > cfg.t_final)) {
      throw Error(ErrorCode::InvalidValue, "snapshot time " + std::to_string(t) + " outside [0, t_final]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace molt
