#include <benchmark/benchmark.h>

#include "samarl/encoder.hpp"
#include "samarl/env.hpp"
#include "samarl/orca.hpp"

using namespace samarl;

static void BM_KinematicsStep(benchmark::State& state) {
  BodyState body;
  body.p = {0.0, 0.0};
  body.v = {1.0, 0.0};
  body.theta = 0.0;
  KinematicLimits limits;
  LocalAction action{1.0, 0.5, 0.1};
  for (auto _ : state) {
    LocalAction a = clamp_action(action, body.theta, body.v.norm(), 0.25, limits);
    body = integrate(body, a, 0.25, limits);
    benchmark::DoNotOptimize(body);
  }
}
BENCHMARK(BM_KinematicsStep);

static void BM_EnvStep(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_robots = 3;
  cfg.n_humans = 10;
  auto [world, obs] = reset(cfg, 7);
  std::vector<LocalAction> actions(cfg.n_robots, LocalAction{0.5, 0.0, 0.0});
  for (auto _ : state) {
    World w = world;
    benchmark::DoNotOptimize(step(w, actions));
  }
}
BENCHMARK(BM_EnvStep);

static void BM_OrcaSolve(benchmark::State& state) {
  PublicState self;
  self.p = {0.0, 0.0};
  self.v = {1.0, 0.0};
  std::vector<PublicState> neighbors;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 10; ++i) {
    PublicState n;
    n.p = {u(rng), u(rng)};
    n.v = {u(rng) * 0.2, u(rng) * 0.2};
    neighbors.push_back(n);
  }
  OrcaParams params;
  for (auto _ : state) {
    auto planes = orca_halfplanes(self, self.rho, neighbors, params, 0.25);
    benchmark::DoNotOptimize(solve_velocity({1.0, 0.0}, planes, 1.5));
  }
}
BENCHMARK(BM_OrcaSolve);

static void BM_EncoderForward(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_robots = 3;
  cfg.n_humans = 10;
  auto [world, obs] = reset(cfg, 11);
  nn::EncoderConfig ecfg;
  ecfg.d_model = 32;
  ecfg.layers = 1;
  nn::Encoder enc(ecfg);
  nn::ParamStore ps;
  std::mt19937_64 rng(0);
  enc.init_params(ps, "enc", rng);
  HistoryBuffer hist;
  hist.window = ecfg.history;
  for (int k = 0; k < ecfg.history; ++k) hist.push(obs[0]);
  std::vector<nn::EncoderInput> batch{nn::build_encoder_input(hist, ecfg)};
  for (auto _ : state) {
    nn::Tape t;
    benchmark::DoNotOptimize(enc.forward(t, ps, "enc", batch));
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_EncoderForward);

BENCHMARK_MAIN();
