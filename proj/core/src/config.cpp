#include "evac/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "evac/errors.hpp"

namespace evac {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
  if (consumed != value.size()) {
    throw ConfigError("config: key '" + key + "' has trailing junk in '" + value + "'");
  }
  return v;
}

long long to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v)) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
  return static_cast<long long>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key");
    }
    values[key] = value;
  }
  return values;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_key_values(in);
}

void apply_config(TrainConfig& cfg, const KeyValues& values) {
  if (const auto it = values.find("scenario"); it != values.end()) {
    try {
      cfg.scenario = Scenario::named(it->second);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"scenario", [](const std::string&, const std::string&) { /* applied above */ }},
      {"n_cylinders",
       [&](const auto& k, const auto& v) { cfg.scenario.n_cylinders = static_cast<int>(to_int(k, v)); }},
      {"cylinders_dynamic",
       [&](const auto& k, const auto& v) { cfg.scenario.cylinders_dynamic = to_bool(k, v); }},
      {"has_concave",
       [&](const auto& k, const auto& v) { cfg.scenario.has_concave = to_bool(k, v); }},
      {"episodes",
       [&](const auto& k, const auto& v) { cfg.episodes = static_cast<int>(to_int(k, v)); }},
      {"max_steps",
       [&](const auto& k, const auto& v) { cfg.max_steps_per_episode = static_cast<int>(to_int(k, v)); }},
      {"batch_size",
       [&](const auto& k, const auto& v) { cfg.batch_size = static_cast<int>(to_int(k, v)); }},
      {"buffer_capacity",
       [&](const auto& k, const auto& v) { cfg.buffer_capacity = static_cast<std::size_t>(to_int(k, v)); }},
      {"seed",
       [&](const auto& k, const auto& v) { cfg.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"gamma", [&](const auto& k, const auto& v) { cfg.gamma = to_double(k, v); }},
      {"alpha", [&](const auto& k, const auto& v) { cfg.alpha = to_double(k, v); }},
      {"tau", [&](const auto& k, const auto& v) { cfg.tau = to_double(k, v); }},
      {"eps_min", [&](const auto& k, const auto& v) { cfg.eps_min = to_double(k, v); }},
      {"eps_max", [&](const auto& k, const auto& v) { cfg.eps_max = to_double(k, v); }},
      {"exploration_fraction",
       [&](const auto& k, const auto& v) { cfg.exploration_fraction = to_double(k, v); }},
      {"agent_radius", [&](const auto& k, const auto& v) { cfg.world.agent_radius = to_double(k, v); }},
      {"step_length", [&](const auto& k, const auto& v) { cfg.world.step_length = to_double(k, v); }},
      {"cylinder_radius",
       [&](const auto& k, const auto& v) { cfg.world.cylinder_radius = to_double(k, v); }},
      {"cylinder_height",
       [&](const auto& k, const auto& v) { cfg.world.cylinder_height = to_double(k, v); }},
      {"arc_outer_radius",
       [&](const auto& k, const auto& v) { cfg.world.arc_outer_radius = to_double(k, v); }},
      {"arc_thickness",
       [&](const auto& k, const auto& v) { cfg.world.arc_thickness = to_double(k, v); }},
      {"arc_height", [&](const auto& k, const auto& v) { cfg.world.arc_height = to_double(k, v); }},
      {"arc_opening_heading_deg",
       [&](const auto& k, const auto& v) { cfg.world.arc_opening_heading = to_double(k, v) * kDegToRad; }},
      {"static_bound_half",
       [&](const auto& k, const auto& v) { cfg.world.static_bound_half = to_double(k, v); }},
      {"dynamic_bound_half",
       [&](const auto& k, const auto& v) { cfg.world.dynamic_bound_half = to_double(k, v); }},
      {"static_separation",
       [&](const auto& k, const auto& v) { cfg.world.static_separation = to_double(k, v); }},
      {"dynamic_separation",
       [&](const auto& k, const auto& v) { cfg.world.dynamic_separation = to_double(k, v); }},
      {"agent_clearance",
       [&](const auto& k, const auto& v) { cfg.world.agent_clearance = to_double(k, v); }},
      {"dynamic_step",
       [&](const auto& k, const auto& v) { cfg.world.dynamic_step = to_double(k, v); }},
      {"heading_sigma_deg",
       [&](const auto& k, const auto& v) { cfg.world.heading_sigma = to_double(k, v) * kDegToRad; }},
      {"max_place_attempts",
       [&](const auto& k, const auto& v) { cfg.world.max_place_attempts = static_cast<int>(to_int(k, v)); }},
      {"max_move_attempts",
       [&](const auto& k, const auto& v) { cfg.world.max_move_attempts = static_cast<int>(to_int(k, v)); }},
  };

  for (const auto& [key, value] : values) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second(key, value);
  }
}

std::string config_snapshot(const TrainConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "scenario = " << cfg.scenario.name << '\n'
      << "n_cylinders = " << cfg.scenario.n_cylinders << '\n'
      << "cylinders_dynamic = " << (cfg.scenario.cylinders_dynamic ? "true" : "false") << '\n'
      << "has_concave = " << (cfg.scenario.has_concave ? "true" : "false") << '\n'
      << "episodes = " << cfg.episodes << '\n'
      << "max_steps = " << cfg.max_steps_per_episode << '\n'
      << "batch_size = " << cfg.batch_size << '\n'
      << "buffer_capacity = " << cfg.buffer_capacity << '\n'
      << "seed = " << cfg.seed << '\n'
      << "gamma = " << cfg.gamma << '\n'
      << "alpha = " << cfg.alpha << '\n'
      << "tau = " << cfg.tau << '\n'
      << "eps_min = " << cfg.eps_min << '\n'
      << "eps_max = " << cfg.eps_max << '\n'
      << "exploration_fraction = " << cfg.exploration_fraction << '\n'
      << "agent_radius = " << cfg.world.agent_radius << '\n'
      << "step_length = " << cfg.world.step_length << '\n'
      << "cylinder_radius = " << cfg.world.cylinder_radius << '\n'
      << "cylinder_height = " << cfg.world.cylinder_height << '\n'
      << "arc_outer_radius = " << cfg.world.arc_outer_radius << '\n'
      << "arc_thickness = " << cfg.world.arc_thickness << '\n'
      << "arc_height = " << cfg.world.arc_height << '\n'
      << "arc_opening_heading_deg = " << cfg.world.arc_opening_heading / kDegToRad << '\n'
      << "static_bound_half = " << cfg.world.static_bound_half << '\n'
      << "dynamic_bound_half = " << cfg.world.dynamic_bound_half << '\n'
      << "static_separation = " << cfg.world.static_separation << '\n'
      << "dynamic_separation = " << cfg.world.dynamic_separation << '\n'
      << "agent_clearance = " << cfg.world.agent_clearance << '\n'
      << "dynamic_step = " << cfg.world.dynamic_step << '\n'
      << "heading_sigma_deg = " << cfg.world.heading_sigma / kDegToRad << '\n'
      << "max_place_attempts = " << cfg.world.max_place_attempts << '\n'
      << "max_move_attempts = " << cfg.world.max_move_attempts << '\n';
  return out.str();
}

}  // namespace evac
