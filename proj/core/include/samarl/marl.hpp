#pragma once

#include <cstdint>
#include <vector>

#include "samarl/policy.hpp"

namespace samarl::marl {

struct TrainConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip = 0.2;
  double value_clip = 0.2;
  double entropy_coef = 0.01;
  double learning_rate = 5e-4;
  int ppo_epochs = 15;
  int minibatch_count = 1;
  int episodes = 10000;
  int batch_episodes = 1;  // episodes collected per update
  std::uint64_t seed = 0;
  bool parameter_sharing = true;
  double max_grad_norm = 10.0;
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// delta_t = r_t + gamma * v_{t+1} * (1 - done_t) - v_t;
/// A_t = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}; returns = A + v.
GaeResult gae(const std::vector<double>& rewards, const std::vector<double>& values,
              double bootstrap, double gamma, double lambda,
              const std::vector<bool>& dones);

/// Scalar clipped-surrogate PPO actor loss (minimized). Advantages are
/// expected to be normalized by the caller.
double actor_loss(const std::vector<double>& new_logp, const std::vector<double>& old_logp,
                  const std::vector<double>& advantages, double entropy, double clip,
                  double kappa);

/// Scalar clipped value loss: mean of max(unclipped^2, clipped^2) errors.
double critic_loss(const std::vector<double>& values, const std::vector<double>& old_values,
                   const std::vector<double>& returns, double value_clip);

// --- tape-graph variants used by the PPO update ---

/// new_logp: B x 1 Var; old_logp/advantages: B x 1 constants.
nn::Var actor_loss_graph(nn::Tape& t, nn::Var new_logp, const nn::Mat& old_logp,
                         const nn::Mat& advantages, nn::Var entropy, double clip,
                         double kappa);

nn::Var critic_loss_graph(nn::Tape& t, nn::Var values, const nn::Mat& old_values,
                          const nn::Mat& returns, double value_clip);

}  // namespace samarl::marl
