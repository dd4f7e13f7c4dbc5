#include "evac/world.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <set>

#include "evac/errors.hpp"

namespace evac {
namespace {

constexpr double kPi = std::numbers::pi;

WorldState empty_world() {
  WorldState world;
  world.exit = {0, 0.0};  // south wall
  return world;
}

// Reference sweep classifier: sample the motion densely and aggregate the
// pointwise classifications with exit > wall > obstacle priority. The union
// of sampled disks is a subset of the swept capsule, so this oracle can only
// under-detect by less than the sample spacing.
Contact sampled_sweep(Vec2 from, Vec2 to, const WorldState& world, int samples = 2048) {
  std::set<Contact> seen;
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const Pose p{from.x + t * (to.x - from.x), from.y + t * (to.y - from.y), 0.0};
    seen.insert(classify_contact(p, world));
  }
  if (seen.count(Contact::Exit)) return Contact::Exit;
  if (seen.count(Contact::Wall)) return Contact::Wall;
  if (seen.count(Contact::Obstacle)) return Contact::Obstacle;
  return Contact::None;
}

WorldState mirrored_x(const WorldState& world) {
  WorldState m = world;
  m.agent.x = -world.agent.x;
  m.agent.theta = normalize_angle(kPi - world.agent.theta);
  switch (world.exit.wall_index) {
    case 0: m.exit = {0, -world.exit.center_offset}; break;
    case 1: m.exit = {3, world.exit.center_offset}; break;
    case 2: m.exit = {2, -world.exit.center_offset}; break;
    case 3: m.exit = {1, world.exit.center_offset}; break;
  }
  for (Obstacle& o : m.obstacles) {
    o.center.x = -o.center.x;
    o.opening_heading = normalize_angle(kPi - o.opening_heading);
    o.motion_heading = normalize_angle(kPi - o.motion_heading);
  }
  return m;
}

TEST(Scenario, NamedDefinitions) {
  EXPECT_EQ(Scenario::named("empty").n_cylinders, 0);
  EXPECT_FALSE(Scenario::named("empty").has_concave);
  EXPECT_EQ(Scenario::named("cyl1").n_cylinders, 1);
  EXPECT_EQ(Scenario::named("cyl3").n_cylinders, 3);
  EXPECT_FALSE(Scenario::named("cyl3").cylinders_dynamic);
  EXPECT_TRUE(Scenario::named("concave").has_concave);
  EXPECT_EQ(Scenario::named("concave").n_cylinders, 0);
  EXPECT_TRUE(Scenario::named("dyn1").cylinders_dynamic);
  EXPECT_EQ(Scenario::named("dyn3").n_cylinders, 3);
  EXPECT_THROW(Scenario::named("bogus"), std::invalid_argument);
}

TEST(Reset, EmptyRoom) {
  WorldParams params;
  Rng rng(1);
  const WorldState world = reset(Scenario::named("empty"), params, rng);
  EXPECT_TRUE(world.obstacles.empty());
  EXPECT_EQ(world.step_count, 0u);
  const double lim = 1.25 - params.agent_radius;
  EXPECT_LE(std::abs(world.agent.x), lim);
  EXPECT_LE(std::abs(world.agent.y), lim);
}

TEST(Reset, ThreeStaticCylinders) {
  WorldParams params;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const WorldState world = reset(Scenario::named("cyl3"), params, rng);
    ASSERT_EQ(world.obstacles.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(world.obstacles[i].kind, ObstacleKind::Cylinder);
      EXPECT_FALSE(world.obstacles[i].dynamic);
      EXPECT_LE(std::abs(world.obstacles[i].center.x), 0.7);
      EXPECT_LE(std::abs(world.obstacles[i].center.y), 0.7);
      for (std::size_t j = i + 1; j < 3; ++j) {
        EXPECT_GE((world.obstacles[i].center - world.obstacles[j].center).norm(), 0.7);
      }
    }
  }
}

TEST(Reset, ConcaveArcCentered) {
  WorldParams params;
  Rng rng(7);
  const WorldState world = reset(Scenario::named("concave"), params, rng);
  ASSERT_EQ(world.obstacles.size(), 1u);
  const Obstacle& arc = world.obstacles[0];
  EXPECT_EQ(arc.kind, ObstacleKind::ConcaveArc);
  EXPECT_DOUBLE_EQ(arc.center.x, 0.0);
  EXPECT_DOUBLE_EQ(arc.center.y, 0.0);
  EXPECT_DOUBLE_EQ(arc.radius, 0.6);
  EXPECT_DOUBLE_EQ(arc.thickness, 0.1);
  EXPECT_DOUBLE_EQ(arc.height, 0.25);
}

TEST(Reset, InvariantsHoldAcrossSeeds) {
  WorldParams params;
  for (const char* name : {"empty", "cyl1", "cyl3", "concave", "dyn1", "dyn3"}) {
    const Scenario scenario = Scenario::named(name);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Rng rng(seed);
      const WorldState world = reset(scenario, params, rng);
      ASSERT_EQ(classify_contact(world.agent, world), Contact::None)
          << name << " seed " << seed;
      ASSERT_GT(world.agent.theta, -kPi);
      ASSERT_LE(world.agent.theta, kPi);
      ASSERT_LE(std::abs(world.exit.center_offset), 1.25 - 0.25);
      const double bound = scenario.cylinders_dynamic ? 0.75 : 0.7;
      const double separation = scenario.cylinders_dynamic ? 0.5 : 0.7;
      for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        const Obstacle& o = world.obstacles[i];
        if (o.kind != ObstacleKind::Cylinder) continue;
        ASSERT_LE(std::abs(o.center.x), bound) << name << " seed " << seed;
        ASSERT_LE(std::abs(o.center.y), bound) << name << " seed " << seed;
        ASSERT_GE((o.center - world.agent.position()).norm(), 0.5)
            << name << " seed " << seed;
        for (std::size_t j = i + 1; j < world.obstacles.size(); ++j) {
          if (world.obstacles[j].kind != ObstacleKind::Cylinder) continue;
          ASSERT_GE((o.center - world.obstacles[j].center).norm(), separation)
              << name << " seed " << seed;
        }
      }
    }
  }
}

TEST(Reset, ImpossibleConstraintsRaiseConfigError) {
  WorldParams params;
  params.static_separation = 5.0;  // cannot fit three cylinders 5 m apart
  Rng rng(3);
  EXPECT_THROW(reset(Scenario::named("cyl3"), params, rng), ConfigError);
}

TEST(ClassifyContact, CenteredAgentInEmptyWorldIsFree) {
  const WorldState world = empty_world();
  EXPECT_EQ(classify_contact({0, 0, 0}, world), Contact::None);
}

TEST(ClassifyContact, NearEastWallWithoutExit) {
  WorldState world = empty_world();
  world.exit = {3, 0.0};  // west wall, far away
  // 1.25 - 1.20 = 0.05 < agent radius 0.106: the disk overlaps the wall.
  EXPECT_EQ(classify_contact({1.20, 0, 0}, world), Contact::Wall);
  // At exactly one radius from the plane there is no overlap.
  EXPECT_EQ(classify_contact({1.25 - 0.106, 0, 0}, world), Contact::None);
}

TEST(ClassifyContact, NearCylinder) {
  WorldState world = empty_world();
  Obstacle cyl;
  cyl.center = {0.5, 0.0};
  world.obstacles.push_back(cyl);
  // 0.25 < 0.106 + 0.1524 = 0.2584.
  EXPECT_EQ(classify_contact({0.25, 0, 0}, world), Contact::Obstacle);
  EXPECT_EQ(classify_contact({0.5 - 0.26, 0, 0}, world), Contact::None);
}

TEST(ClassifyContact, ExitTakesPriorityOverWall) {
  WorldState world = empty_world();
  world.exit = {1, 0.0};  // east wall, centered
  EXPECT_EQ(classify_contact({1.20, 0, 0}, world), Contact::Exit);
  // Overlapping the east wall away from the exit span is a wall contact.
  EXPECT_EQ(classify_contact({1.20, 0.9, 0}, world), Contact::Wall);
}

TEST(ClassifyContact, MirrorEquivariant) {
  WorldParams params;
  for (const char* name : {"cyl3", "concave", "dyn3"}) {
    for (std::uint64_t seed = 100; seed < 400; ++seed) {
      Rng rng(seed);
      const WorldState world = reset(Scenario::named(name), params, rng);
      const WorldState mirror = mirrored_x(world);
      Rng poses(seed + 9000);
      for (int i = 0; i < 20; ++i) {
        const Pose p{poses.uniform(-1.24, 1.24), poses.uniform(-1.24, 1.24), 0.0};
        const Pose pm{-p.x, p.y, 0.0};
        ASSERT_EQ(classify_contact(p, world), classify_contact(pm, mirror))
            << name << " seed " << seed;
      }
    }
  }
}

TEST(ApplyAction, StraightStepFromCenter) {
  WorldState world = empty_world();
  world.exit = {3, 0.0};
  world.agent = {0, 0, 0};
  const StepOutcome outcome = apply_action(world, 3);
  EXPECT_DOUBLE_EQ(outcome.new_agent.x, 0.1524);
  EXPECT_DOUBLE_EQ(outcome.new_agent.y, 0.0);
  EXPECT_DOUBLE_EQ(outcome.new_agent.theta, 0.0);
  EXPECT_DOUBLE_EQ(outcome.reward, -0.1);
  EXPECT_FALSE(outcome.terminal);
  EXPECT_EQ(world.step_count, 1u);
  EXPECT_DOUBLE_EQ(world.agent.x, 0.1524);
}

TEST(ApplyAction, QuarterTurnLeft) {
  WorldState world = empty_world();
  world.exit = {3, 0.0};
  world.agent = {0, 0, 0};
  const StepOutcome outcome = apply_action(world, 5);  // +90 degrees
  EXPECT_NEAR(outcome.new_agent.x, 0.0, 1e-15);
  EXPECT_NEAR(outcome.new_agent.y, 0.1524, 1e-15);
  EXPECT_DOUBLE_EQ(outcome.new_agent.theta, kPi / 2.0);
}

TEST(ApplyAction, ActionAngleTableAscending) {
  for (int i = 0; i < kNumActions; ++i) {
    EXPECT_NEAR(kActionAngles[i], (-135.0 + 45.0 * i) * kPi / 180.0, 1e-15);
  }
}

TEST(ApplyAction, InvalidatedStepLeavesPoseBitIdentical) {
  WorldState world = empty_world();
  world.exit = {3, 0.0};
  world.agent = {1.18, 0.0, 0.0};  // facing the east wall
  const Pose before = world.agent;
  const StepOutcome outcome = apply_action(world, 3);
  EXPECT_EQ(outcome.contact, Contact::Wall);
  EXPECT_FALSE(outcome.terminal);
  EXPECT_DOUBLE_EQ(outcome.reward, -0.1);
  EXPECT_EQ(std::memcmp(&world.agent, &before, sizeof(Pose)), 0);
  EXPECT_EQ(world.step_count, 1u);
}

TEST(ApplyAction, ReachingExitTerminatesWithZeroReward) {
  WorldState world = empty_world();
  world.exit = {1, 0.0};
  world.agent = {1.0, 0.0, 0.0};
  const StepOutcome outcome = apply_action(world, 3);
  EXPECT_EQ(outcome.contact, Contact::Exit);
  EXPECT_TRUE(outcome.terminal);
  EXPECT_DOUBLE_EQ(outcome.reward, 0.0);
  EXPECT_DOUBLE_EQ(world.agent.x, 1.1524);
}

TEST(ApplyAction, SweptCapsuleCatchesTangentGraze) {
  WorldState world = empty_world();
  world.exit = {3, 0.0};
  Obstacle cyl;
  cyl.center = {0.0, 0.0};
  world.obstacles.push_back(cyl);
  // Path from (-0.0762, -0.25) to (+0.0762, -0.25): both endpoint disks
  // clear the cylinder (hypot(0.0762, 0.25) = 0.2614 > 0.2584) but the
  // mid-path point is 0.25 away, inside the combined radius.
  world.agent = {-0.0762, -0.25, 0.0};
  const Pose before = world.agent;
  EXPECT_EQ(classify_contact(world.agent, world), Contact::None);
  const StepOutcome outcome = apply_action(world, 3);
  EXPECT_EQ(outcome.contact, Contact::Obstacle);
  EXPECT_EQ(std::memcmp(&world.agent, &before, sizeof(Pose)), 0);
}

TEST(ClassifySweep, AgreesWithSampledOracle) {
  WorldParams params;
  int cases = 0;
  for (const char* name : {"empty", "cyl3", "concave", "dyn3"}) {
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
      Rng rng(seed * 7 + 1);
      WorldState world = reset(Scenario::named(name), params, rng);
      for (int trial = 0; trial < 5; ++trial) {
        const Pose start{rng.uniform(-1.14, 1.14), rng.uniform(-1.14, 1.14),
                         normalize_angle(rng.uniform(-kPi, kPi))};
        if (classify_contact(start, world) != Contact::None) continue;
        const Vec2 from = start.position();
        const Vec2 to = from + dir_from_angle(start.theta) * params.step_length;
        ASSERT_EQ(classify_sweep(from, to, world), sampled_sweep(from, to, world))
            << name << " seed " << seed << " trial " << trial;
        ++cases;
      }
    }
  }
  EXPECT_GE(cases, 3000);
}

TEST(ApplyAction, AgentNeverLeftOverlappingAfterRandomWalk) {
  WorldParams params;
  for (const char* name : {"empty", "cyl3", "concave", "dyn3"}) {
    Rng rng(42);
    WorldState world = reset(Scenario::named(name), params, rng);
    for (int step = 0; step < 2000; ++step) {
      const int action = static_cast<int>(rng.uniform_int(kNumActions));
      const StepOutcome outcome = apply_action(world, action);
      step_dynamic_obstacles(world, rng);
      if (outcome.terminal) {
        // The terminal pose completed a sweep that reached the exit; grazing
        // exits can leave the endpoint disk past the exit's corner, so only
        // non-terminal poses must classify as contact-free.
        ASSERT_NE(classify_contact(world.agent, world), Contact::Obstacle) << name;
        world = reset(Scenario::named(name), params, rng);
        continue;
      }
      ASSERT_EQ(classify_contact(world.agent, world), Contact::None)
          << name << " step " << step;
    }
  }
}

TEST(StepDynamicObstacles, BoundsSeparationAndStepLength) {
  WorldParams params;
  Rng rng(5);
  WorldState world = reset(Scenario::named("dyn3"), params, rng);
  int moved = 0;
  std::array<double, 3> path_length{};
  for (int step = 0; step < 10000; ++step) {
    const auto before = world.obstacles;
    step_dynamic_obstacles(world, rng);
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
      const double displacement = (world.obstacles[i].center - before[i].center).norm();
      if (displacement > 0.0) {
        ASSERT_NEAR(displacement, 0.025, 1e-12);
        ++moved;
        path_length[i] += displacement;
      }
      ASSERT_LE(std::abs(world.obstacles[i].center.x), 0.75);
      ASSERT_LE(std::abs(world.obstacles[i].center.y), 0.75);
      ASSERT_GE((world.obstacles[i].center - world.agent.position()).norm(),
                params.agent_radius + params.cylinder_radius);
      for (std::size_t j = i + 1; j < world.obstacles.size(); ++j) {
        ASSERT_GE((world.obstacles[i].center - world.obstacles[j].center).norm(), 0.5)
            << "step " << step;
      }
    }
  }
  // Obstacles pinned against the bound reject all 50 draws for a while, so
  // not every step moves, but each obstacle must keep wandering.
  EXPECT_GT(moved, 18000);
  for (double length : path_length) EXPECT_GT(length, 10.0);
}

TEST(StepDynamicObstacles, StaysInsideBoundWhenCornered) {
  WorldParams params;
  WorldState world = empty_world();
  world.exit = {0, 0.0};
  world.params = params;
  world.agent = {-1.0, -1.0, 0.0};
  Obstacle cyl;
  cyl.center = {0.74, 0.0};
  cyl.dynamic = true;
  cyl.motion_heading = 0.0;  // pushing against the +x bound
  world.obstacles.push_back(cyl);
  Rng rng(9);
  for (int step = 0; step < 2000; ++step) {
    step_dynamic_obstacles(world, rng);
    ASSERT_LE(std::abs(world.obstacles[0].center.x), 0.75);
    ASSERT_LE(std::abs(world.obstacles[0].center.y), 0.75);
  }
}

TEST(StepDynamicObstacles, CloseNeighborsKeepSeparation) {
  WorldParams params;
  WorldState world = empty_world();
  world.exit = {0, 0.0};
  world.params = params;
  world.agent = {-1.0, -1.0, 0.0};
  for (double x : {-0.255, 0.255}) {  // 0.51 m apart
    Obstacle cyl;
    cyl.center = {x, 0.0};
    cyl.dynamic = true;
    world.obstacles.push_back(cyl);
  }
  Rng rng(10);
  for (int step = 0; step < 5000; ++step) {
    step_dynamic_obstacles(world, rng);
    ASSERT_GE((world.obstacles[0].center - world.obstacles[1].center).norm(), 0.5);
  }
}

TEST(ExitSegment, SpansLieWithinWalls) {
  RoomSpec room;
  for (int wall = 0; wall < 4; ++wall) {
    for (double off : {-1.0, -0.3, 0.0, 0.8, 1.0}) {
      const auto [a, b] = exit_segment(room, {wall, off});
      EXPECT_NEAR((b - a).norm(), room.exit_width, 1e-15);
      EXPECT_LE(std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y)}),
                room.half_extent + 1e-12);
    }
  }
}

}  // namespace
}  // namespace evac
