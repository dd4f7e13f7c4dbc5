#include "evac/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evac {

namespace {

constexpr int kDx[kGridActions] = {1, -1, 0, 0};
constexpr int kDy[kGridActions] = {0, 0, 1, -1};

struct Transition {
  int next_x;
  int next_y;
  double reward;
  bool terminal;
};

Transition step(const Gridworld& g, int x, int y, int action) {
  int nx = x + kDx[action];
  int ny = y + kDy[action];
  if (nx < 0 || nx >= g.width || ny < 0 || ny >= g.height) {
    nx = x;
    ny = y;
  }
  if (g.is_goal(nx, ny)) return {nx, ny, 0.0, true};
  return {nx, ny, g.step_reward, false};
}

}  // namespace

QTable tabular_q_oracle(const Gridworld& grid, double alpha, int max_sweeps, double tol) {
  QTable q(grid.n_states());
  for (auto& row : q) row.fill(0.0);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (int y = 0; y < grid.height; ++y) {
      for (int x = 0; x < grid.width; ++x) {
        if (grid.is_goal(x, y)) continue;
        for (int a = 0; a < kGridActions; ++a) {
          const Transition t = step(grid, x, y, a);
          double target = t.reward;
          if (!t.terminal) {
            const auto& next = q[grid.state_index(t.next_x, t.next_y)];
            target += grid.gamma * *std::max_element(next.begin(), next.end());
          }
          double& value = q[grid.state_index(x, y)][a];
          const double update = alpha * (target - value);
          value += update;
          max_change = std::max(max_change, std::abs(update));
        }
      }
    }
    if (max_change < tol) return q;
  }
  throw std::runtime_error("tabular_q_oracle: no convergence within sweep limit");
}

double bellman_residual(const Gridworld& grid, const QTable& table) {
  double worst = 0.0;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (grid.is_goal(x, y)) continue;
      for (int a = 0; a < kGridActions; ++a) {
        const Transition t = step(grid, x, y, a);
        double target = t.reward;
        if (!t.terminal) {
          const auto& next = table[grid.state_index(t.next_x, t.next_y)];
          target += grid.gamma * *std::max_element(next.begin(), next.end());
        }
        worst = std::max(worst, std::abs(table[grid.state_index(x, y)][a] - target));
      }
    }
  }
  return worst;
}

}  // namespace evac
