#pragma once

#include <string>
#include <vector>

#include "samarl/encoder.hpp"

namespace samarl::nn {

struct PolicyConfig {
  EncoderConfig encoder;
  int hidden = 64;
  double waypoint_box = 3.0;    // MA offsets squashed into a +/- box (m)
  bool single_agent = false;    // ablation: critics see only own features
  double init_log_std = -0.5;
  bool shared_encoder = true;   // one p_star shared by MA and LA actors
};

/// Plain-math outcome of sampling one robot's action.
struct MacroSample {
  Vec2 waypoint_world;
  Eigen::RowVectorXd pre;  // 1x2 pre-squash Gaussian sample
  double logp = 0.0;
};

struct LocalSample {
  LocalAction action;
  Eigen::RowVectorXd pre;  // 1x3
  double logp = 0.0;
};

/// Actor/critic heads over the ST-graph feature Y. Owns parameter naming:
/// "act" (actor encoder p_star), "crit" (centralized critic encoder copy),
/// "ma_actor", "la_actor", "ma_critic", "la_critic".
class PolicyNet {
 public:
  explicit PolicyNet(PolicyConfig cfg) : cfg_(cfg), encoder_(cfg.encoder) {}

  const PolicyConfig& config() const { return cfg_; }
  const Encoder& encoder() const { return encoder_; }

  /// Registers actor-side parameters in `actor` and critic-side in `critic`.
  void init_params(ParamStore& actor, ParamStore& critic, std::mt19937_64& rng) const;

  Var actor_features(Tape& t, ParamStore& actor,
                     const std::vector<EncoderInput>& batch) const;
  Var critic_features(Tape& t, ParamStore& critic,
                      const std::vector<EncoderInput>& batch) const;

  /// B x 2 Gaussian mean over pre-squash waypoint offsets.
  Var ma_mean(Tape& t, ParamStore& actor, Var y, const Mat& self_feats) const;
  /// B x 3 Gaussian mean over pre-squash (ax, ay, dtheta).
  Var la_mean(Tape& t, ParamStore& actor, Var y, const Mat& self_wp_feats) const;
  Var ma_log_std(Tape& t, ParamStore& actor) const;  // 1 x 2
  Var la_log_std(Tape& t, ParamStore& actor) const;  // 1 x 3

  /// Centralized values. `step_groups` lists, per world step, the batch rows
  /// of the robots acting in that step; `group_of_row` maps each row to its
  /// group. `extra` holds per-row constant inputs (self/waypoint features).
  Var ma_value(Tape& t, ParamStore& critic, Var y_crit, const Groups& step_groups,
               const std::vector<int>& group_of_row, const Mat& extra) const;
  Var la_value(Tape& t, ParamStore& critic, Var y_crit, const Groups& step_groups,
               const std::vector<int>& group_of_row, const Mat& extra) const;

  /// Row-wise diagonal-Gaussian log density of `actions` (B x k, pre-squash).
  Var gaussian_logp(Tape& t, Var mean, Var log_std, const Mat& actions) const;
  /// Scalar entropy of the diagonal Gaussian (shared across rows).
  Var gaussian_entropy(Tape& t, Var log_std) const;

  // --- plain-math action mapping (no tape) ---
  MacroSample sample_macro(const Eigen::RowVectorXd& mean, const Eigen::RowVectorXd& log_std,
                           const Observation& obs, std::mt19937_64& rng,
                           bool deterministic) const;
  LocalSample sample_local(const Eigen::RowVectorXd& mean, const Eigen::RowVectorXd& log_std,
                           const Observation& obs, const KinematicLimits& limits,
                           std::mt19937_64& rng, bool deterministic) const;

 private:
  Var mlp_head(Tape& t, ParamStore& ps, const std::string& prefix, Var input,
               int out_dim) const;

  PolicyConfig cfg_;
  Encoder encoder_;
};

}  // namespace samarl::nn
