#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "evac/qnet.hpp"
#include "evac/replay.hpp"
#include "evac/world.hpp"

namespace evac {

struct TrainConfig {
  int episodes = 1000;
  int max_steps_per_episode = 10000;
  double gamma = 0.999;
  double alpha = 1e-4;
  double tau = 0.1;
  double eps_min = 0.1;
  double eps_max = 1.0;
  double exploration_fraction = 0.5;  // fraction of episodes spent near eps_min
  int batch_size = 50;
  std::size_t buffer_capacity = 10000;
  std::uint64_t seed = 0;
  Scenario scenario;
  WorldParams world;

  void validate() const;
};

struct EpisodeStats {
  int episode = 0;
  int steps = 0;
  double cumulative_reward = 0.0;
  double epsilon = 0.0;
  bool evacuated = false;
  double wall_time_s = 0.0;
};

/// Exploration probability for a zero-based episode index:
/// eps_min + (eps_max - eps_min) * exp(-(4 / fraction) * (e / episodes)).
double epsilon_for_episode(int episode, const TrainConfig& cfg);

/// Epsilon-greedy pick. Always consumes one coin and one action draw so the
/// per-step draw count is fixed; argmax ties resolve to the lowest index.
int select_action(std::span<const double, kNumActions> q, double eps, Rng& rng);

/// Softmax with max subtraction; sums to 1.
std::array<double, kNumActions> action_preferences(std::span<const double, kNumActions> q);

int argmax_action(std::span<const double, kNumActions> q);

struct EpisodeResult {
  EpisodeStats stats;
  int replay_updates = 0;
};

/// Runs one training episode on `world`: render, epsilon-greedy act, advance
/// dynamic obstacles, store the transition, and take one replay-driven
/// learning step whenever the buffer holds a full batch. Applies exactly one
/// soft target update after termination or truncation.
EpisodeResult run_episode(WorldState& world, NetworkWeights& w_train,
                          NetworkWeights& w_target, AdamState& opt, ReplayBuffer& buffer,
                          const TrainConfig& cfg, int episode, Rng& rng);

struct TrainResult {
  NetworkWeights weights;
  AdamState opt;
  std::vector<EpisodeStats> stats;
  std::uint64_t total_steps = 0;
};

/// Full training run: cfg.episodes randomized episodes on one seeded RNG
/// stream. Per run the stream is consumed as: weight init, then per episode
/// the reset draws followed by per-step draws (exploration coin, exploratory
/// action, dynamic obstacle headings, replay indices). `on_episode`, when
/// set, observes each episode's stats as it completes.
TrainResult train(const TrainConfig& cfg,
                  const std::function<void(const EpisodeStats&)>& on_episode = {});

struct TrajectoryPoint {
  int step = 0;  // 0 marks the spawn pose (action -1, reward 0)
  Pose pose;
  int action = -1;
  double reward = 0.0;
};

struct EvalEpisode {
  int episode = 0;
  int steps = 0;
  bool success = false;
  int collision_steps = 0;
  double cumulative_reward = 0.0;
  std::vector<TrajectoryPoint> trajectory;
};

struct EvalSummary {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_steps_success = 0.0;
  double median_steps_success = 0.0;
  std::vector<EvalEpisode> results;
};

/// Greedy episode (no exploration, no learning) from an explicit start
/// state. `rng` only feeds dynamic obstacle motion.
EvalEpisode run_greedy_episode(const NetworkWeights& w, WorldState world, int step_cap,
                               Rng& rng);

/// Greedy evaluation over n freshly randomized configurations. Episode i
/// uses the independent stream Rng::derive(seed, i), so results are
/// deterministic and order-independent.
EvalSummary evaluate(const NetworkWeights& w, const Scenario& scenario,
                     const WorldParams& params, int n_episodes, std::uint64_t seed,
                     int step_cap = 500);

/// Writes one trajectory as CSV rows `step,x,y,theta,action,reward`.
void write_trajectory(const std::string& path, const EvalEpisode& episode);

/// Metrics CSV helpers (header: episode,steps,cumulative_reward,epsilon,
/// evacuated,wall_time_s).
std::string metrics_header();
std::string metrics_row(const EpisodeStats& s);

}  // namespace evac
