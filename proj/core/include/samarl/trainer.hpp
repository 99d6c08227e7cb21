#pragma once

#include <functional>
#include <optional>
#include <string>

#include "samarl/rollout.hpp"

namespace samarl::marl {

struct UpdateStats {
  double actor_loss_la = 0.0;
  double actor_loss_ma = 0.0;
  double critic_loss_la = 0.0;
  double critic_loss_ma = 0.0;
  double entropy_la = 0.0;
  double entropy_ma = 0.0;
  double actor_grad_norm = 0.0;
  double critic_grad_norm = 0.0;
};

struct TrainProgress {
  int update = 0;
  int episodes_done = 0;
  double mean_episode_reward = 0.0;
  double success_fraction = 0.0;
  UpdateStats stats;
};

/// Called after each update; return true to stop training early.
using ProgressCallback = std::function<bool(const TrainProgress&)>;

class TrainerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Trainer {
 public:
  Trainer(ScenarioConfig env_cfg, nn::PolicyConfig pcfg, TrainConfig tcfg);

  nn::PolicyNet& net() { return net_; }
  nn::ParamStore& actor() { return actor_; }
  nn::ParamStore& critic() { return critic_; }
  const TrainConfig& train_config() const { return tcfg_; }
  const ScenarioConfig& env_config() const { return env_cfg_; }
  std::mt19937_64& rng() { return rng_; }

  /// One PPO update over a collected buffer. Throws TrainerError on
  /// non-finite losses or gradients.
  UpdateStats update(const RolloutBuffer& buf);

  /// Collect/update loop; writes one CSV diagnostics row per update when
  /// `diagnostics_csv` is set. Stops after `tcfg.episodes` episodes or when
  /// the callback returns true.
  void train(const std::optional<std::string>& diagnostics_csv,
             const ProgressCallback& on_update = {});

 private:
  ScenarioConfig env_cfg_;
  nn::PolicyNet net_;
  TrainConfig tcfg_;
  nn::ParamStore actor_, critic_;
  nn::AdamOptimizer actor_opt_, critic_opt_;
  std::mt19937_64 rng_;
};

}  // namespace samarl::marl
