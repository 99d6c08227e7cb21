#pragma once

#include <string>
#include <vector>

#include "samarl/env.hpp"
#include "samarl/tape.hpp"

namespace samarl::nn {

inline constexpr int kTokenDim = 6;  // [rel_x, rel_y, v_x, v_y, rho, dist]

struct EncoderConfig {
  int d_model = 64;
  int heads = 4;
  int layers = 2;
  int history = 5;  // L
};

/// One robot-transition's tokenized history window. Tokens are neighbor (and
/// ego) public states expressed in the observer's goal-centric frame at the
/// corresponding timestep. Index 0 is the oldest valid entry; `pad` counts
/// missing (pre-episode) slots at the front of the window.
struct EncoderInput {
  std::vector<Mat> human_tokens;            // per valid timestep, n x kTokenDim
  std::vector<std::vector<int>> human_ids;  // agent ids, for temporal grouping
  std::vector<Mat> robot_tokens;            // includes the ego token
  std::vector<std::vector<int>> robot_ids;
  int pad = 0;
};

EncoderInput build_encoder_input(const HistoryBuffer& hist, const EncoderConfig& cfg);

/// Observer-centric summary of the robot's own situation, fed to policy and
/// value heads alongside the encoder feature.
Eigen::RowVectorXd self_features(const Observation& obs);
inline constexpr int kSelfFeatDim = 7;

/// Active-waypoint summary in the robot's goal-centric frame.
Eigen::RowVectorXd waypoint_features(const Observation& obs, const Vec2& waypoint_world);
inline constexpr int kWaypointFeatDim = 5;

/// Hybrid spatial-temporal transformer over human and robot streams with
/// cross-modal fusion; forward maps a batch of histories to one fixed-size
/// feature row per batch item.
class Encoder {
 public:
  explicit Encoder(EncoderConfig cfg) : cfg_(cfg) {}

  const EncoderConfig& config() const { return cfg_; }

  /// Registers all parameters under `prefix` (Xavier init).
  void init_params(ParamStore& ps, const std::string& prefix, std::mt19937_64& rng) const;

  /// Returns a B x d_model Var.
  Var forward(Tape& tape, ParamStore& ps, const std::string& prefix,
              const std::vector<EncoderInput>& batch) const;

 private:
  EncoderConfig cfg_;
};

}  // namespace samarl::nn
