#include "evac/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "evac/errors.hpp"

namespace evac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

double arc_inner_radius(const Obstacle& o) { return o.radius - o.thickness; }

// Polar direction the arc's material half faces (opposite the opening).
double arc_material_heading(const Obstacle& o) {
  return normalize_angle(o.opening_heading + kPi);
}

bool cylinder_fits(const WorldState& world, Vec2 center, double separation,
                   const Pose& agent, double agent_clearance) {
  for (const Obstacle& o : world.obstacles) {
    if (o.kind == ObstacleKind::Cylinder) {
      if ((o.center - center).norm() < separation) return false;
    } else {
      const double inner = arc_inner_radius(o);
      if (dist_point_arc_band(center, o.center, inner, o.radius, arc_material_heading(o),
                              kHalfPi) < world.params.cylinder_radius) {
        return false;
      }
    }
  }
  return (agent.position() - center).norm() >= agent_clearance;
}

}  // namespace

const std::array<double, kNumActions> kActionAngles = {
    -3.0 * kPi / 4.0, -kPi / 2.0, -kPi / 4.0, 0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};

std::pair<Vec2, Vec2> exit_segment(const RoomSpec& room, const ExitSpec& exit) {
  const double h = room.half_extent;
  const double w = room.exit_width / 2.0;
  const double c = exit.center_offset;
  switch (exit.wall_index) {
    case 0: return {{c - w, -h}, {c + w, -h}};
    case 1: return {{h, c - w}, {h, c + w}};
    case 2: return {{c - w, h}, {c + w, h}};
    case 3: return {{-h, c - w}, {-h, c + w}};
    default: throw std::invalid_argument("exit wall_index out of range");
  }
}

Scenario Scenario::named(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  if (name == "empty") {
    return s;
  } else if (name == "cyl1") {
    s.n_cylinders = 1;
  } else if (name == "cyl3") {
    s.n_cylinders = 3;
  } else if (name == "concave") {
    s.has_concave = true;
  } else if (name == "dyn1") {
    s.n_cylinders = 1;
    s.cylinders_dynamic = true;
  } else if (name == "dyn3") {
    s.n_cylinders = 3;
    s.cylinders_dynamic = true;
  } else {
    throw std::invalid_argument("unknown scenario: " + std::string(name));
  }
  return s;
}

WorldState reset(const Scenario& scenario, const WorldParams& params, Rng& rng) {
  WorldState world;
  world.params = params;

  world.exit.wall_index = static_cast<int>(rng.uniform_int(4));
  const double offset_max = world.room.half_extent - world.room.exit_width / 2.0;
  world.exit.center_offset = rng.uniform(-offset_max, offset_max);

  if (scenario.has_concave) {
    Obstacle arc;
    arc.kind = ObstacleKind::ConcaveArc;
    arc.center = {0.0, 0.0};
    arc.radius = params.arc_outer_radius;
    arc.thickness = params.arc_thickness;
    arc.height = params.arc_height;
    arc.opening_heading = params.arc_opening_heading;
    world.obstacles.push_back(arc);
  }

  const double pos_max = world.room.half_extent - params.agent_radius;
  bool placed = false;
  for (int attempt = 0; attempt < params.max_place_attempts; ++attempt) {
    Pose candidate;
    candidate.x = rng.uniform(-pos_max, pos_max);
    candidate.y = rng.uniform(-pos_max, pos_max);
    candidate.theta = normalize_angle(rng.uniform(-kPi, kPi));
    if (classify_contact(candidate, world) == Contact::None) {
      world.agent = candidate;
      placed = true;
      break;
    }
  }
  if (!placed) throw ConfigError("reset: could not place agent");

  const double bound =
      scenario.cylinders_dynamic ? params.dynamic_bound_half : params.static_bound_half;
  const double separation =
      scenario.cylinders_dynamic ? params.dynamic_separation : params.static_separation;
  for (int i = 0; i < scenario.n_cylinders; ++i) {
    placed = false;
    for (int attempt = 0; attempt < params.max_place_attempts; ++attempt) {
      const Vec2 center{rng.uniform(-bound, bound), rng.uniform(-bound, bound)};
      if (!cylinder_fits(world, center, separation, world.agent, params.agent_clearance)) {
        continue;
      }
      Obstacle cyl;
      cyl.center = center;
      cyl.radius = params.cylinder_radius;
      cyl.height = params.cylinder_height;
      cyl.dynamic = scenario.cylinders_dynamic;
      if (cyl.dynamic) cyl.motion_heading = normalize_angle(rng.uniform(-kPi, kPi));
      world.obstacles.push_back(cyl);
      placed = true;
      break;
    }
    if (!placed) throw ConfigError("reset: could not place obstacle " + std::to_string(i));
  }

  world.step_count = 0;
  return world;
}

Contact classify_contact(const Pose& pose, const WorldState& world) {
  const double r = world.params.agent_radius;
  const Vec2 p = pose.position();

  const auto [e0, e1] = exit_segment(world.room, world.exit);
  if (dist_point_segment(p, e0, e1) < r) return Contact::Exit;

  const double lim = world.room.half_extent - r;
  if (p.x > lim || p.x < -lim || p.y > lim || p.y < -lim) return Contact::Wall;

  for (const Obstacle& o : world.obstacles) {
    if (o.kind == ObstacleKind::Cylinder) {
      if ((p - o.center).norm() < r + o.radius) return Contact::Obstacle;
    } else {
      if (dist_point_arc_band(p, o.center, arc_inner_radius(o), o.radius,
                              arc_material_heading(o), kHalfPi) < r) {
        return Contact::Obstacle;
      }
    }
  }
  return Contact::None;
}

Contact classify_sweep(Vec2 from, Vec2 to, const WorldState& world) {
  const double r = world.params.agent_radius;

  const auto [e0, e1] = exit_segment(world.room, world.exit);
  if (dist_segment_segment(from, to, e0, e1) < r) return Contact::Exit;

  const double lim = world.room.half_extent - r;
  if (std::max(from.x, to.x) > lim || std::min(from.x, to.x) < -lim ||
      std::max(from.y, to.y) > lim || std::min(from.y, to.y) < -lim) {
    return Contact::Wall;
  }

  for (const Obstacle& o : world.obstacles) {
    if (o.kind == ObstacleKind::Cylinder) {
      if (dist_point_segment(o.center, from, to) < r + o.radius) return Contact::Obstacle;
    } else {
      if (dist_segment_arc_band(from, to, o.center, arc_inner_radius(o), o.radius,
                                arc_material_heading(o), kHalfPi) < r) {
        return Contact::Obstacle;
      }
    }
  }
  return Contact::None;
}

StepOutcome apply_action(WorldState& world, int action_index) {
  if (action_index < 0 || action_index >= kNumActions) {
    throw std::invalid_argument("action index out of range");
  }
  const double new_theta = normalize_angle(world.agent.theta + kActionAngles[action_index]);
  const Vec2 from = world.agent.position();
  const Vec2 to = from + dir_from_angle(new_theta) * world.params.step_length;

  StepOutcome outcome;
  outcome.contact = classify_sweep(from, to, world);
  switch (outcome.contact) {
    case Contact::Exit:
      outcome.new_agent = {to.x, to.y, new_theta};
      outcome.reward = 0.0;
      outcome.terminal = true;
      break;
    case Contact::Wall:
    case Contact::Obstacle:
      outcome.new_agent = world.agent;  // invalidated: pose fully unchanged
      outcome.reward = -0.1;
      break;
    case Contact::None:
      outcome.new_agent = {to.x, to.y, new_theta};
      outcome.reward = -0.1;
      break;
  }
  world.agent = outcome.new_agent;
  ++world.step_count;
  return outcome;
}

void step_dynamic_obstacles(WorldState& world, Rng& rng) {
  const WorldParams& p = world.params;
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    Obstacle& o = world.obstacles[i];
    if (!o.dynamic) continue;
    for (int attempt = 0; attempt < p.max_move_attempts; ++attempt) {
      const double heading = normalize_angle(rng.normal(o.motion_heading, p.heading_sigma));
      const Vec2 cand = o.center + dir_from_angle(heading) * p.dynamic_step;
      if (std::abs(cand.x) > p.dynamic_bound_half || std::abs(cand.y) > p.dynamic_bound_half) {
        continue;
      }
      bool ok = true;
      for (std::size_t j = 0; j < world.obstacles.size() && ok; ++j) {
        if (j == i || world.obstacles[j].kind != ObstacleKind::Cylinder) continue;
        if ((world.obstacles[j].center - cand).norm() < p.dynamic_separation) ok = false;
      }
      if (!ok) continue;
      if ((world.agent.position() - cand).norm() < p.agent_radius + o.radius) continue;
      o.center = cand;
      o.motion_heading = heading;
      break;
    }
  }
}

const char* contact_name(Contact c) {
  switch (c) {
    case Contact::None: return "none";
    case Contact::Wall: return "wall";
    case Contact::Obstacle: return "obstacle";
    case Contact::Exit: return "exit";
  }
  return "?";
}

}  // namespace evac
