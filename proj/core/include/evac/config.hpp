#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "evac/trainer.hpp"

namespace evac {

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. Blank lines and `#` comments are ignored.
/// Throws ConfigError on a malformed line.
KeyValues parse_key_values(std::istream& in);
KeyValues load_key_values(const std::string& path);

/// Applies parsed keys onto a config. The `scenario` key is applied first
/// (it resets the scenario fields to the named defaults) so that explicit
/// keys like `n_cylinders` can then override it. Unknown keys raise
/// ConfigError.
///
/// Recognized keys: scenario, n_cylinders, cylinders_dynamic, has_concave,
/// episodes, max_steps, batch_size, buffer_capacity, seed, gamma, alpha,
/// tau, eps_min, eps_max, exploration_fraction, agent_radius, step_length,
/// cylinder_radius, cylinder_height, arc_outer_radius, arc_thickness,
/// arc_height, arc_opening_heading_deg, static_bound_half,
/// dynamic_bound_half, static_separation, dynamic_separation,
/// agent_clearance, dynamic_step, heading_sigma_deg, max_place_attempts,
/// max_move_attempts.
void apply_config(TrainConfig& cfg, const KeyValues& values);

/// Serializes the full config as a key=value snapshot (round-trips through
/// apply_config).
std::string config_snapshot(const TrainConfig& cfg);

}  // namespace evac
