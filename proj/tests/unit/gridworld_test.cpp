#include "evac/gridworld.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace evac {
namespace {

// Independent reference: double-buffered value iteration on the Q form,
// structured differently from the oracle's in-place relaxation sweeps.
QTable value_iteration(const Gridworld& g, int iterations = 200000, double tol = 1e-14) {
  const int dx[kGridActions] = {1, -1, 0, 0};
  const int dy[kGridActions] = {0, 0, 1, -1};
  QTable q(g.n_states());
  for (auto& row : q) row.fill(0.0);
  for (int it = 0; it < iterations; ++it) {
    QTable next = q;
    double change = 0.0;
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) {
        if (g.is_goal(x, y)) continue;
        for (int a = 0; a < kGridActions; ++a) {
          int nx = std::clamp(x + dx[a], 0, g.width - 1);
          int ny = std::clamp(y + dy[a], 0, g.height - 1);
          double value;
          if (g.is_goal(nx, ny)) {
            value = 0.0;
          } else {
            const auto& row = q[g.state_index(nx, ny)];
            value = g.step_reward + g.gamma * *std::max_element(row.begin(), row.end());
          }
          next[g.state_index(x, y)][a] = value;
          change = std::max(change, std::abs(value - q[g.state_index(x, y)][a]));
        }
      }
    }
    q = std::move(next);
    if (change < tol) break;
  }
  return q;
}

TEST(TabularOracle, TwoCellWorldReachesGoalValueZero) {
  Gridworld g;
  g.width = 2;
  g.height = 1;
  g.goal_x = 1;
  g.goal_y = 0;
  const QTable q = tabular_q_oracle(g);
  // Action 0 (+x) from the left cell transitions straight into the goal and
  // earns the terminal reward 0.
  EXPECT_NEAR(q[g.state_index(0, 0)][0], 0.0, 1e-12);
  // Action 1 (-x) bumps the edge (-0.1) and then the best path still exits.
  EXPECT_NEAR(q[g.state_index(0, 0)][1], -0.1 + g.gamma * 0.0, 1e-9);
}

TEST(TabularOracle, LineWorldMatchesGeometricSeries) {
  Gridworld g;
  g.width = 10;
  g.height = 1;
  g.goal_x = 9;
  g.goal_y = 0;
  const QTable q = tabular_q_oracle(g);
  // k steps from the goal, the toward-goal action is worth
  // -0.1 * sum_{i=0}^{k-2} gamma^i for k >= 2.
  for (int k = 2; k <= 9; ++k) {
    const int x = 9 - k;
    double expected = 0.0;
    for (int i = 0; i <= k - 2; ++i) expected += -0.1 * std::pow(g.gamma, i);
    EXPECT_NEAR(q[g.state_index(x, 0)][0], expected, 1e-9) << "k = " << k;
  }
  // Adjacent to the goal the toward action is worth exactly 0.
  EXPECT_NEAR(q[g.state_index(8, 0)][0], 0.0, 1e-12);
}

TEST(TabularOracle, BellmanResidualBelowTolerance) {
  Gridworld g;  // 5x5 default
  const QTable q = tabular_q_oracle(g);
  EXPECT_LT(bellman_residual(g, q), 1e-6);
}

TEST(TabularOracle, MatchesIndependentValueIterationOn100States) {
  Gridworld g;
  g.width = 10;
  g.height = 10;
  g.goal_x = 7;
  g.goal_y = 2;
  const QTable oracle = tabular_q_oracle(g);
  const QTable reference = value_iteration(g);
  ASSERT_EQ(oracle.size(), 100u);
  for (int s = 0; s < g.n_states(); ++s) {
    for (int a = 0; a < kGridActions; ++a) {
      ASSERT_NEAR(oracle[s][a], reference[s][a], 1e-6) << "state " << s << " action " << a;
    }
  }
  EXPECT_LT(bellman_residual(g, oracle), 1e-6);
}

TEST(TabularOracle, ThrowsWithoutConvergence) {
  Gridworld g;
  EXPECT_THROW(tabular_q_oracle(g, 0.5, 2, 1e-12), std::runtime_error);
}

}  // namespace
}  // namespace evac
