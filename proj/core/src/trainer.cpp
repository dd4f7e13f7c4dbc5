#include "evac/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evac {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void TrainConfig::validate() const {
  if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
  if (max_steps_per_episode <= 0) throw std::invalid_argument("max steps must be positive");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma outside [0, 1]");
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau outside [0, 1]");
  if (eps_min < 0.0 || eps_min > eps_max || eps_max > 1.0) {
    throw std::invalid_argument("need 0 <= eps_min <= eps_max <= 1");
  }
  if (exploration_fraction <= 0.0 || exploration_fraction > 1.0) {
    throw std::invalid_argument("exploration fraction outside (0, 1]");
  }
  if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
  if (buffer_capacity == 0) throw std::invalid_argument("buffer capacity must be positive");
}

double epsilon_for_episode(int episode, const TrainConfig& cfg) {
  const double progress = static_cast<double>(episode) / cfg.episodes;
  return cfg.eps_min +
         (cfg.eps_max - cfg.eps_min) * std::exp(-(4.0 / cfg.exploration_fraction) * progress);
}

int argmax_action(std::span<const double, kNumActions> q) {
  int best = 0;
  for (int i = 1; i < kNumActions; ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

int select_action(std::span<const double, kNumActions> q, double eps, Rng& rng) {
  const double coin = rng.uniform();
  const int random_action = static_cast<int>(rng.uniform_int(kNumActions));
  if (coin < eps) return random_action;
  return argmax_action(q);
}

std::array<double, kNumActions> action_preferences(std::span<const double, kNumActions> q) {
  for (double v : q) {
    if (!std::isfinite(v)) throw std::invalid_argument("action_preferences: non-finite input");
  }
  const double peak = *std::max_element(q.begin(), q.end());
  std::array<double, kNumActions> p;
  double sum = 0.0;
  for (int i = 0; i < kNumActions; ++i) {
    p[i] = std::exp(q[i] - peak);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

EpisodeResult run_episode(WorldState& world, NetworkWeights& w_train,
                          NetworkWeights& w_target, AdamState& opt, ReplayBuffer& buffer,
                          const TrainConfig& cfg, int episode, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  const double eps = epsilon_for_episode(episode, cfg);

  EpisodeResult result;
  result.stats.episode = episode;
  result.stats.epsilon = eps;

  ImageState state = render(world);
  for (int step = 0; step < cfg.max_steps_per_episode; ++step) {
    const auto input = to_network_input(state);
    const auto q = forward(w_train, input);
    const int action = select_action(q, eps, rng);

    const StepOutcome outcome = apply_action(world, action);
    step_dynamic_obstacles(world, rng);
    ImageState next_state = render(world);

    buffer.push(Experience{state, action, next_state, outcome.reward, outcome.terminal});
    if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
      const auto batch = buffer.sample(static_cast<std::size_t>(cfg.batch_size), rng);
      const TdResult td = td_loss_and_grads(w_train, w_target, batch, cfg.gamma);
      adam_step(w_train, opt, td.grads, cfg.alpha);
      ++result.replay_updates;
    }

    result.stats.steps += 1;
    result.stats.cumulative_reward += outcome.reward;
    state = next_state;
    if (outcome.terminal) {
      result.stats.evacuated = true;
      break;
    }
  }

  w_target = soft_update(w_target, w_train, cfg.tau);
  result.stats.wall_time_s = elapsed_seconds(start);
  return result;
}

TrainResult train(const TrainConfig& cfg,
                  const std::function<void(const EpisodeStats&)>& on_episode) {
  cfg.validate();
  Rng rng(cfg.seed);

  TrainResult result;
  result.weights = init_weights(rng);
  NetworkWeights w_target = result.weights;
  ReplayBuffer buffer(cfg.buffer_capacity);

  result.stats.reserve(cfg.episodes);
  for (int e = 0; e < cfg.episodes; ++e) {
    WorldState world = reset(cfg.scenario, cfg.world, rng);
    EpisodeResult ep = run_episode(world, result.weights, w_target, result.opt, buffer, cfg,
                                   e, rng);
    result.total_steps += static_cast<std::uint64_t>(ep.stats.steps);
    result.stats.push_back(ep.stats);
    if (on_episode) on_episode(ep.stats);
  }
  return result;
}

EvalEpisode run_greedy_episode(const NetworkWeights& w, WorldState world, int step_cap,
                               Rng& rng) {
  EvalEpisode result;
  result.trajectory.push_back(TrajectoryPoint{0, world.agent, -1, 0.0});

  ImageState state = render(world);
  for (int step = 1; step <= step_cap; ++step) {
    const auto input = to_network_input(state);
    const auto q = forward(w, input);
    const int action = argmax_action(q);

    const StepOutcome outcome = apply_action(world, action);
    step_dynamic_obstacles(world, rng);

    result.steps += 1;
    result.cumulative_reward += outcome.reward;
    if (outcome.contact == Contact::Wall || outcome.contact == Contact::Obstacle) {
      result.collision_steps += 1;
    }
    result.trajectory.push_back(TrajectoryPoint{step, world.agent, action, outcome.reward});
    if (outcome.terminal) {
      result.success = true;
      break;
    }
    state = render(world);
  }
  return result;
}

EvalSummary evaluate(const NetworkWeights& w, const Scenario& scenario,
                     const WorldParams& params, int n_episodes, std::uint64_t seed,
                     int step_cap) {
  if (n_episodes <= 0) throw std::invalid_argument("evaluate: need at least one episode");

  EvalSummary summary;
  summary.episodes = n_episodes;
  std::vector<double> success_steps;
  for (int e = 0; e < n_episodes; ++e) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(e)));
    WorldState world = reset(scenario, params, rng);
    EvalEpisode ep = run_greedy_episode(w, std::move(world), step_cap, rng);
    ep.episode = e;
    if (ep.success) success_steps.push_back(static_cast<double>(ep.steps));
    summary.results.push_back(std::move(ep));
  }

  summary.success_rate = static_cast<double>(success_steps.size()) / n_episodes;
  if (!success_steps.empty()) {
    double sum = 0.0;
    for (double s : success_steps) sum += s;
    summary.mean_steps_success = sum / static_cast<double>(success_steps.size());
    std::sort(success_steps.begin(), success_steps.end());
    const std::size_t mid = success_steps.size() / 2;
    summary.median_steps_success = success_steps.size() % 2 == 1
                                       ? success_steps[mid]
                                       : 0.5 * (success_steps[mid - 1] + success_steps[mid]);
  }
  return summary;
}

void write_trajectory(const std::string& path, const EvalEpisode& episode) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trajectory file: " + path);
  out << "step,x,y,theta,action,reward\n";
  out.precision(17);
  for (const TrajectoryPoint& p : episode.trajectory) {
    out << p.step << ',' << p.pose.x << ',' << p.pose.y << ',' << p.pose.theta << ','
        << p.action << ',' << p.reward << '\n';
  }
}

std::string metrics_header() {
  return "episode,steps,cumulative_reward,epsilon,evacuated,wall_time_s";
}

std::string metrics_row(const EpisodeStats& s) {
  std::ostringstream row;
  row.precision(17);
  row << s.episode << ',' << s.steps << ',' << s.cumulative_reward << ',' << s.epsilon << ','
      << (s.evacuated ? 1 : 0) << ',';
  row.precision(6);
  row << s.wall_time_s;
  return row.str();
}

}  // namespace evac
