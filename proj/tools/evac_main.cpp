// Command-line front end for training, evaluating and inspecting room
// evacuation policies.

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "evac/camera.hpp"
#include "evac/config.hpp"
#include "evac/errors.hpp"
#include "evac/trainer.hpp"
#include "evac/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace evac;

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string output_root() {
  if (const char* env = std::getenv("EVAC_OUT_ROOT"); env && *env) return env;
  return "runs";
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value pairs from --set
};

TrainConfig build_config(const CommonOpts& opts) {
  TrainConfig cfg;
  if (!opts.config_path.empty()) apply_config(cfg, load_key_values(opts.config_path));
  KeyValues extra;
  for (const std::string& kv : opts.overrides) {
    std::istringstream in(kv);
    const KeyValues parsed = parse_key_values(in);
    extra.insert(parsed.begin(), parsed.end());
  }
  apply_config(cfg, extra);
  return cfg;
}

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Key=value config file; flags override file values");
  cmd->add_option("--set", opts.overrides,
                  "Extra key=value override (repeatable), e.g. --set gamma=0.99");
}

Pose parse_pose(const std::string& text) {
  Pose pose;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> pose.x >> c1 >> pose.y >> c2 >> pose.theta) || c1 != ',' || c2 != ',') {
    throw ConfigError("--pose expects 'x,y,theta', got '" + text + "'");
  }
  pose.theta = normalize_angle(pose.theta);
  return pose;
}

int cmd_train(const CommonOpts& common, const std::string& scenario_name,
              std::optional<int> episodes, std::optional<std::uint64_t> seed,
              std::string out_dir, std::optional<int> max_steps, bool force) {
  TrainConfig cfg = build_config(common);
  if (!scenario_name.empty()) cfg.scenario = Scenario::named(scenario_name);
  if (episodes) cfg.episodes = *episodes;
  if (seed) cfg.seed = *seed;
  if (max_steps) cfg.max_steps_per_episode = *max_steps;
  cfg.validate();

  if (out_dir.empty()) {
    out_dir = (fs::path(output_root()) /
               (cfg.scenario.name + "-seed" + std::to_string(cfg.seed)))
                  .string();
  }
  const fs::path dir(out_dir);
  if (fs::exists(dir) && !fs::is_empty(dir) && !force) {
    throw ConfigError("output directory '" + out_dir +
                      "' already exists; pass --force to overwrite");
  }
  fs::create_directories(dir);

  const std::string started = iso_timestamp();
  std::ofstream metrics(dir / "metrics.csv");
  if (!metrics) throw std::runtime_error("cannot write metrics in " + out_dir);
  metrics << metrics_header() << '\n';
  metrics.flush();

  std::cout << "training scenario=" << cfg.scenario.name << " episodes=" << cfg.episodes
            << " seed=" << cfg.seed << " -> " << out_dir << std::endl;

  int done = 0;
  const TrainResult result = train(cfg, [&](const EpisodeStats& s) {
    metrics << metrics_row(s) << '\n';
    metrics.flush();  // interrupted runs keep partial curves
    ++done;
    if (done % 100 == 0) {
      std::cout << "  episode " << done << "/" << cfg.episodes << " steps=" << s.steps
                << " eps=" << std::setprecision(6) << s.epsilon << std::endl;
    }
  });

  save_checkpoint((dir / "checkpoint.bin").string(), result.weights, result.opt);
  std::ofstream cfg_out(dir / "config.cfg");
  cfg_out << config_snapshot(cfg);

  json manifest;
  manifest["tool_version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["scenario"] = cfg.scenario.name;
  manifest["episodes"] = cfg.episodes;
  manifest["total_steps"] = result.total_steps;
  manifest["started_at"] = started;
  manifest["finished_at"] = iso_timestamp();
  manifest["artifacts"] = {{"checkpoint", "checkpoint.bin"},
                           {"metrics", "metrics.csv"},
                           {"config", "config.cfg"}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

  std::cout << std::setprecision(6) << "done: total_steps=" << result.total_steps
            << " final_epsilon=" << result.stats.back().epsilon << std::endl;
  return 0;
}

int cmd_eval(const CommonOpts& common, const std::string& checkpoint_path,
             const std::string& scenario_name, int episodes, std::uint64_t seed,
             const std::string& trajectories_dir, int cap) {
  TrainConfig cfg = build_config(common);
  if (!scenario_name.empty()) cfg.scenario = Scenario::named(scenario_name);

  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  const EvalSummary summary =
      evaluate(ckpt.weights, cfg.scenario, cfg.world, episodes, seed, cap);

  if (!trajectories_dir.empty()) {
    fs::create_directories(trajectories_dir);
    for (const EvalEpisode& ep : summary.results) {
      std::ostringstream name;
      name << "episode_" << std::setfill('0') << std::setw(4) << ep.episode << ".csv";
      write_trajectory((fs::path(trajectories_dir) / name.str()).string(), ep);
    }
  }

  std::cout << std::setprecision(6);
  std::cout << "episodes        " << summary.episodes << '\n';
  std::cout << "success_rate    " << summary.success_rate << '\n';
  std::cout << "mean_steps      " << summary.mean_steps_success << '\n';
  std::cout << "median_steps    " << summary.median_steps_success << '\n';
  int collisions = 0;
  for (const EvalEpisode& ep : summary.results) collisions += ep.collision_steps;
  std::cout << "collision_steps " << collisions << '\n';
  return 0;
}

int cmd_inspect(const CommonOpts& common, const std::string& scenario_name,
                const std::string& pose_text, std::uint64_t seed,
                const std::string& checkpoint_path, const std::string& out_prefix) {
  TrainConfig cfg = build_config(common);
  if (!scenario_name.empty()) cfg.scenario = Scenario::named(scenario_name);

  Rng rng(seed);
  WorldState world = reset(cfg.scenario, cfg.world, rng);
  if (!pose_text.empty()) world.agent = parse_pose(pose_text);

  const ImageState image = render(world);
  if (!out_prefix.empty()) {
    std::ofstream native(out_prefix + ".ppm", std::ios::binary);
    write_ppm(native, image);
    std::ofstream scaled(out_prefix + "_10x.ppm", std::ios::binary);
    write_ppm(scaled, image, 10);
    std::cout << "wrote " << out_prefix << ".ppm and " << out_prefix << "_10x.ppm\n";
  }

  std::cout << std::setprecision(6);
  std::cout << "pose " << world.agent.x << ' ' << world.agent.y << ' ' << world.agent.theta
            << '\n';
  if (checkpoint_path.empty()) {
    std::cerr << "no checkpoint given: skipping Q-value output" << std::endl;
    return 0;
  }

  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  const auto q = forward(ckpt.weights, to_network_input(image));
  const auto prefs = action_preferences(q);
  std::cout << "action angle_deg q_value preference\n";
  for (int a = 0; a < kNumActions; ++a) {
    std::cout << a << ' ' << kActionAngles[a] * kRadToDeg << ' ' << q[a] << ' ' << prefs[a]
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vision-driven room evacuation: Dyna-Q training and evaluation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* train_cmd = app.add_subcommand("train", "Train a policy on a scenario");
  CommonOpts train_common;
  add_common_options(train_cmd, train_common);
  std::string train_scenario;
  std::optional<int> train_episodes;
  std::optional<std::uint64_t> train_seed;
  std::optional<int> train_max_steps;
  std::string train_out;
  bool train_force = false;
  train_cmd->add_option("--scenario", train_scenario,
                        "One of: empty, cyl1, cyl3, concave, dyn1, dyn3");
  train_cmd->add_option("--episodes", train_episodes, "Number of training episodes");
  train_cmd->add_option("--seed", train_seed, "RNG seed");
  train_cmd->add_option("--max-steps", train_max_steps, "Step cap per episode");
  train_cmd->add_option("--out", train_out,
                        "Run directory (default: $EVAC_OUT_ROOT/<scenario>-seed<seed>)");
  train_cmd->add_flag("--force", train_force, "Allow writing into an existing directory");

  auto* eval_cmd = app.add_subcommand("eval", "Greedy evaluation of a checkpoint");
  CommonOpts eval_common;
  add_common_options(eval_cmd, eval_common);
  std::string eval_checkpoint;
  std::string eval_scenario;
  int eval_episodes = 100;
  std::uint64_t eval_seed = 0;
  std::string eval_traj;
  int eval_cap = 500;
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--scenario", eval_scenario, "Scenario name");
  eval_cmd->add_option("--episodes", eval_episodes, "Evaluation episodes")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_seed, "RNG seed");
  eval_cmd->add_option("--trajectories", eval_traj, "Directory for per-episode trajectories");
  eval_cmd->add_option("--cap", eval_cap, "Step cap per evaluation episode");

  auto* inspect_cmd =
      app.add_subcommand("inspect", "Render the observation at a pose and dump Q-values");
  CommonOpts inspect_common;
  add_common_options(inspect_cmd, inspect_common);
  std::string inspect_scenario;
  std::string inspect_pose;
  std::uint64_t inspect_seed = 0;
  std::string inspect_checkpoint;
  std::string inspect_out = "inspect";
  inspect_cmd->add_option("--scenario", inspect_scenario, "Scenario name");
  inspect_cmd->add_option("--pose", inspect_pose, "Agent pose as 'x,y,theta'");
  inspect_cmd->add_option("--seed", inspect_seed, "Seed for the sampled configuration");
  inspect_cmd->add_option("--checkpoint", inspect_checkpoint, "Checkpoint for Q output");
  inspect_cmd->add_option("--out-ppm", inspect_out, "Output prefix for PPM dumps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      return cmd_train(train_common, train_scenario, train_episodes, train_seed, train_out,
                       train_max_steps, train_force);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_common, eval_checkpoint, eval_scenario, eval_episodes, eval_seed,
                      eval_traj, eval_cap);
    }
    if (inspect_cmd->parsed()) {
      return cmd_inspect(inspect_common, inspect_scenario, inspect_pose, inspect_seed,
                         inspect_checkpoint, inspect_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
