#pragma once

#include "samarl/marl.hpp"

namespace samarl::marl {

/// One LA-timeline transition for one robot.
struct LaRecord {
  nn::EncoderInput actor_input;
  nn::EncoderInput critic_input;
  Eigen::RowVectorXd self_feats;  // kSelfFeatDim
  Eigen::RowVectorXd wp_feats;    // kWaypointFeatDim, active MA
  Eigen::RowVectorXd wp_ctx;      // 2: mean of other robots' waypoint offsets
  Eigen::RowVectorXd pre_action;  // 1x3 pre-squash
  double logp = 0.0;
  double value = 0.0;
  double reward = 0.0;
  bool done = false;
  int robot = 0;
  int step_key = 0;  // shared by robots acting in the same world step
  double advantage = 0.0;
  double ret = 0.0;
};

/// One MA-timeline transition (decision epoch) for one robot.
struct MaRecord {
  nn::EncoderInput actor_input;
  nn::EncoderInput critic_input;
  Eigen::RowVectorXd self_feats;
  Eigen::RowVectorXd pre_action;  // 1x2 pre-squash waypoint offset
  double logp = 0.0;
  double value = 0.0;
  double reward = 0.0;  // discounted LA-reward sum over the epoch
  bool done = false;
  int robot = 0;
  int epoch_key = 0;
  double advantage = 0.0;
  double ret = 0.0;
};

struct RolloutBuffer {
  std::vector<LaRecord> la;
  std::vector<MaRecord> ma;
  int episodes = 0;
  double mean_episode_reward = 0.0;
  double success_fraction = 0.0;
  std::vector<EpisodeStatus> statuses;
};

/// Full-visibility observation used by the centralized critics.
Observation full_observe(const World& world, int robot_id);

/// Runs n_episodes under the current (frozen) parameters, sampling MAs at
/// decision epochs and LAs every step; fills GAE advantages and returns.
RolloutBuffer collect_rollout(const ScenarioConfig& env_cfg, const nn::PolicyNet& net,
                              nn::ParamStore& actor, nn::ParamStore& critic,
                              const TrainConfig& tcfg, std::mt19937_64& rng,
                              int n_episodes, bool deterministic = false);

}  // namespace samarl::marl
