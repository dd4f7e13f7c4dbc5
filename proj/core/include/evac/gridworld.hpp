#pragma once

#include <array>
#include <vector>

namespace evac {

/// Small deterministic gridworld with the evacuation reward scheme: -0.1 per
/// step, 0 on the transition into the goal. Moves off the grid leave the
/// state unchanged (and still cost -0.1), mirroring collision invalidation.
/// Actions are 0..3 = +x, -x, +y, -y.
struct Gridworld {
  int width = 5;
  int height = 5;
  int goal_x = 4;
  int goal_y = 4;
  double step_reward = -0.1;
  double gamma = 0.999;

  int n_states() const { return width * height; }
  int state_index(int x, int y) const { return y * width + x; }
  bool is_goal(int x, int y) const { return x == goal_x && y == goal_y; }
};

inline constexpr int kGridActions = 4;

using QTable = std::vector<std::array<double, kGridActions>>;

/// Iterates the tabular Q-learning update over all state-action pairs until
/// the largest change falls below `tol`. The goal state is terminal with all
/// Q-values pinned at 0. Throws std::runtime_error if `max_sweeps` pass
/// without convergence.
QTable tabular_q_oracle(const Gridworld& grid, double alpha = 0.5, int max_sweeps = 100000,
                        double tol = 1e-12);

/// Largest Bellman-optimality residual over all state-action pairs.
double bellman_residual(const Gridworld& grid, const QTable& table);

}  // namespace evac
