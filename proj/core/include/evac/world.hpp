#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evac/geometry.hpp"
#include "evac/rng.hpp"

namespace evac {

/// Agent position and heading in world coordinates. theta is kept in
/// (-pi, pi], counterclockwise from the +x axis.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
};

/// Square room centered at the origin. The interior is
/// [-half_extent, half_extent]^2.
struct RoomSpec {
  double half_extent = 1.25;
  double wall_height = 1.0;
  double exit_width = 0.5;
  double exit_height = 1.0;
  double exit_depth = 0.2;
};

/// Exit placement: wall 0..3 = south (y=-h), east (x=+h), north (y=+h),
/// west (x=-h); center_offset is the signed coordinate of the exit center
/// along that wall.
struct ExitSpec {
  int wall_index = 0;
  double center_offset = 0.0;
};

/// Endpoints of the exit segment in the wall plane.
std::pair<Vec2, Vec2> exit_segment(const RoomSpec& room, const ExitSpec& exit);

enum class ObstacleKind { Cylinder, ConcaveArc };

struct Obstacle {
  ObstacleKind kind = ObstacleKind::Cylinder;
  Vec2 center;
  double radius = 0.1524;        // cylinder body radius; arc outer radius
  double height = 0.3;
  double thickness = 0.1;        // arc only: radial wall thickness
  double opening_heading = 0.0;  // arc only: direction the concavity faces
  bool dynamic = false;
  double motion_heading = 0.0;   // dynamic only: heading of the last move
};

struct Scenario {
  std::string name = "empty";
  int n_cylinders = 0;
  bool cylinders_dynamic = false;
  bool has_concave = false;

  /// One of: empty, cyl1, cyl3, concave, dyn1, dyn3. Throws
  /// std::invalid_argument on anything else.
  static Scenario named(std::string_view name);
};

/// Tunable environment constants. Defaults reproduce the reference setup;
/// every field can be overridden from a scenario config file.
struct WorldParams {
  double agent_radius = 0.106;       // circumscribed disk of the square footprint
  double step_length = 0.1524;       // 0.5 ft
  double cylinder_radius = 0.1524;   // 0.5 ft
  double cylinder_height = 0.3;
  double arc_outer_radius = 0.6;
  double arc_thickness = 0.1;
  double arc_height = 0.25;
  double arc_opening_heading = 0.0;
  double static_bound_half = 0.7;    // static cylinder centers: 1.4 x 1.4 area
  double dynamic_bound_half = 0.75;  // dynamic cylinder centers: 1.5 x 1.5 area
  double static_separation = 0.7;
  double dynamic_separation = 0.5;
  double agent_clearance = 0.5;      // obstacle-to-agent spacing at reset
  double dynamic_step = 0.025;
  double heading_sigma = 0.5235987755982988;  // 30 degrees
  int max_place_attempts = 10000;
  int max_move_attempts = 50;
};

struct WorldState {
  RoomSpec room;
  ExitSpec exit;
  std::vector<Obstacle> obstacles;
  Pose agent;
  std::uint64_t step_count = 0;
  WorldParams params;
};

enum class Contact { None, Wall, Obstacle, Exit };

struct StepOutcome {
  Pose new_agent;
  double reward = -0.1;
  bool terminal = false;
  Contact contact = Contact::None;
};

/// Relative rotation of each action, ascending: -135..+135 degrees in 45
/// degree increments.
inline constexpr int kNumActions = 7;
extern const std::array<double, kNumActions> kActionAngles;

/// Builds a randomized episode configuration: uniform exit wall and offset,
/// uniform collision-free agent pose, then obstacles placed by rejection
/// sampling under the scenario's separation constraints. Draw order: exit
/// wall, exit offset, agent (x, y, theta per attempt), then per cylinder
/// (x, y per attempt, plus an initial motion heading when dynamic).
/// Throws ConfigError when a placement cannot be found within
/// params.max_place_attempts.
WorldState reset(const Scenario& scenario, const WorldParams& params, Rng& rng);

/// Classifies the agent disk at `pose` against the scene. Exit contact takes
/// priority over wall, wall over obstacle.
Contact classify_contact(const Pose& pose, const WorldState& world);

/// Classifies the capsule swept by the agent disk from `from` to `to`.
/// Same priority order as classify_contact.
Contact classify_sweep(Vec2 from, Vec2 to, const WorldState& world);

/// Applies one action: rotate by the indexed angle, advance one step length
/// along the new heading, sweep-test the path. Exit contact ends the episode
/// with reward 0 and moves the agent; wall/obstacle contact invalidates the
/// move (pose fully unchanged, reward -0.1); otherwise the agent advances at
/// reward -0.1. Increments world.step_count.
StepOutcome apply_action(WorldState& world, int action_index);

/// Advances every dynamic obstacle one 0.025 m step along a heading drawn
/// from a normal around its previous heading. Moves that leave the bound,
/// break pairwise separation, or overlap the agent disk are resampled up to
/// params.max_move_attempts; a stuck obstacle stays put.
void step_dynamic_obstacles(WorldState& world, Rng& rng);

const char* contact_name(Contact c);

}  // namespace evac
