#include <benchmark/benchmark.h>

#include "evac/camera.hpp"
#include "evac/qnet.hpp"
#include "evac/replay.hpp"
#include "evac/trainer.hpp"
#include "evac/world.hpp"

namespace {

using namespace evac;

WorldState make_world(const char* scenario, std::uint64_t seed) {
  WorldParams params;
  Rng rng(seed);
  return reset(Scenario::named(scenario), params, rng);
}

void BM_ResetCyl3(benchmark::State& state) {
  WorldParams params;
  const Scenario scenario = Scenario::named("cyl3");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(reset(scenario, params, rng));
  }
}
BENCHMARK(BM_ResetCyl3);

void BM_ApplyAction(benchmark::State& state) {
  WorldState world = make_world("cyl3", 3);
  Rng rng(4);
  for (auto _ : state) {
    const int action = static_cast<int>(rng.uniform_int(kNumActions));
    benchmark::DoNotOptimize(apply_action(world, action));
    if (classify_contact(world.agent, world) == Contact::Exit) world = make_world("cyl3", 3);
  }
}
BENCHMARK(BM_ApplyAction);

void BM_RenderEmpty(benchmark::State& state) {
  const WorldState world = make_world("empty", 1);
  for (auto _ : state) benchmark::DoNotOptimize(render(world));
}
BENCHMARK(BM_RenderEmpty);

void BM_RenderConcave(benchmark::State& state) {
  const WorldState world = make_world("concave", 2);
  for (auto _ : state) benchmark::DoNotOptimize(render(world));
}
BENCHMARK(BM_RenderConcave);

void BM_Forward(benchmark::State& state) {
  Rng rng(5);
  const NetworkWeights w = init_weights(rng);
  const ImageState image = render(make_world("cyl3", 6));
  const auto input = to_network_input(image);
  for (auto _ : state) benchmark::DoNotOptimize(forward(w, input));
}
BENCHMARK(BM_Forward);

void BM_TdLossAndGradsBatch50(benchmark::State& state) {
  Rng rng(7);
  const NetworkWeights w_train = init_weights(rng);
  const NetworkWeights w_target = init_weights(rng);
  std::vector<Experience> batch;
  WorldState world = make_world("cyl3", 8);
  ImageState s = render(world);
  for (int i = 0; i < 50; ++i) {
    const StepOutcome out = apply_action(world, static_cast<int>(rng.uniform_int(7)));
    ImageState s2 = render(world);
    batch.push_back(Experience{s, 3, s2, out.reward, out.terminal});
    s = s2;
  }
  for (auto _ : state) benchmark::DoNotOptimize(td_loss_and_grads(w_train, w_target, batch, 0.999));
}
BENCHMARK(BM_TdLossAndGradsBatch50);

void BM_AdamStep(benchmark::State& state) {
  Rng rng(9);
  NetworkWeights w = init_weights(rng);
  const NetworkWeights grads = init_weights(rng);
  AdamState opt;
  for (auto _ : state) {
    adam_step(w, opt, grads, 1e-4);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_AdamStep);

void BM_ReplaySample50(benchmark::State& state) {
  ReplayBuffer buffer(10000);
  Experience e;
  for (int i = 0; i < 10000; ++i) buffer.push(e);
  Rng rng(10);
  for (auto _ : state) benchmark::DoNotOptimize(buffer.sample(50, rng));
}
BENCHMARK(BM_ReplaySample50);

}  // namespace

BENCHMARK_MAIN();
