#pragma once

#include "samarl/episode_log.hpp"

namespace samarl::eval {

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RobotSummary {
  bool reached = false;
  double navigation_time = 0.0;      // s; horizon when not reached
  double path_length = 0.0;          // m
  double min_human_surface_dist = 0.0;  // +inf-free: horizon cap applied upstream
  double discomfort_fraction = 0.0;  // steps with surface dist <= 0.45
  double straight_line_dist = 0.0;   // start -> goal
  double v_pref = 0.0;
};

struct EpisodeSummary {
  EpisodeStatus status = EpisodeStatus::Running;
  bool collision = false;
  bool timeout = false;
  std::vector<RobotSummary> robots;
};

/// Recomputes the summary purely from a logged episode.
EpisodeSummary summarize(const EpisodeLog& log);

/// Fraction of episodes where every robot reached its goal (joint criterion).
double success_rate(const std::vector<EpisodeSummary>& summaries);

/// Proxy component score in [0, 100]; 0 when the robot did not reach.
/// 100 * (0.5 + 0.25 * time_efficiency + 0.25 * comfort), where
/// time_efficiency = (straight-line distance / v_pref) / navigation time,
/// clipped to [0, 1], and comfort = 1 - discomfort_fraction.
double robot_social_score(const EpisodeSummary& summary, int robot_id);

/// Eq.-style weighted aggregation; weights must lie on the simplex exactly
/// (nonnegative, sum within 1e-9 of 1) with one weight per robot.
double mrsan_social_score(const std::vector<EpisodeSummary>& summaries,
                          const std::vector<double>& weights);

}  // namespace samarl::eval
