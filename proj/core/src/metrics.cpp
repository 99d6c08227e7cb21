#include "samarl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace samarl::eval {

namespace {
constexpr double kDiscomfortDist = 0.45;
}

EpisodeSummary summarize(const EpisodeLog& log) {
  const int nr = log.config.n_robots;
  const double horizon = log.config.max_steps() * log.config.dt;
  EpisodeSummary out;
  out.status = log.final_status;
  out.collision = log.final_status == EpisodeStatus::Collision;
  out.timeout = log.final_status == EpisodeStatus::Timeout;
  out.robots.resize(nr);

  for (int i = 0; i < nr; ++i) {
    RobotSummary& rs = out.robots[i];
    const AgentState& init = log.initial_agents[i];
    rs.v_pref = init.prv.v_pref;
    rs.straight_line_dist = (init.prv.goal - init.pub.p).norm();
    rs.navigation_time = horizon;
    rs.min_human_surface_dist = std::numeric_limits<double>::infinity();

    Vec2 prev = init.pub.p;
    int discomfort_steps = 0;
    for (const LoggedStep& step : log.steps) {
      const AgentState& a = step.agents[i];
      if (!rs.reached) rs.path_length += (a.pub.p - prev).norm();
      prev = a.pub.p;
      double min_dis = std::numeric_limits<double>::infinity();
      for (std::size_t j = nr; j < step.agents.size(); ++j) {
        const PublicState& h = step.agents[j].pub;
        min_dis = std::min(min_dis, surface_distance(a.pub, h));
      }
      rs.min_human_surface_dist = std::min(rs.min_human_surface_dist, min_dis);
      if (!rs.reached && min_dis <= kDiscomfortDist) ++discomfort_steps;
      if (!rs.reached && (a.prv.goal - a.pub.p).norm() < a.pub.rho) {
        rs.reached = true;
        rs.navigation_time = (step.t + 1) * log.config.dt;
      }
    }
    if (std::isinf(rs.min_human_surface_dist)) rs.min_human_surface_dist = 0.0;
    const int active_steps =
        rs.reached ? static_cast<int>(std::lround(rs.navigation_time / log.config.dt))
                   : static_cast<int>(log.steps.size());
    rs.discomfort_fraction =
        active_steps > 0 ? static_cast<double>(discomfort_steps) / active_steps : 0.0;
  }
  return out;
}

double success_rate(const std::vector<EpisodeSummary>& summaries) {
  if (summaries.empty()) throw MetricsError("success_rate over an empty list");
  int ok = 0;
  for (const auto& s : summaries) {
    bool all = !s.robots.empty();
    for (const auto& r : s.robots) all = all && r.reached;
    if (all && !s.collision) ++ok;
  }
  return static_cast<double>(ok) / summaries.size();
}

double robot_social_score(const EpisodeSummary& summary, int robot_id) {
  if (robot_id < 0 || robot_id >= static_cast<int>(summary.robots.size()))
    throw MetricsError("robot_social_score: robot id out of range");
  const RobotSummary& r = summary.robots[robot_id];
  if (!r.reached) return 0.0;
  double te = 0.0;
  if (r.navigation_time > 0.0 && r.v_pref > 0.0)
    te = (r.straight_line_dist / r.v_pref) / r.navigation_time;
  te = std::clamp(te, 0.0, 1.0);
  const double comfort = 1.0 - r.discomfort_fraction;
  return 100.0 * (0.5 + 0.25 * te + 0.25 * comfort);
}

double mrsan_social_score(const std::vector<EpisodeSummary>& summaries,
                          const std::vector<double>& weights) {
  if (summaries.empty()) throw MetricsError("mrsan_social_score over an empty list");
  const std::size_t nr = summaries.front().robots.size();
  if (weights.size() != nr)
    throw MetricsError("mrsan_social_score: one weight per robot required");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw MetricsError("mrsan_social_score: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw MetricsError("mrsan_social_score: weights must sum to 1");

  double score = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    double mean = 0.0;
    for (const auto& s : summaries) mean += robot_social_score(s, static_cast<int>(i));
    mean /= summaries.size();
    score += weights[i] * mean;
  }
  return score;
}

}  // namespace samarl::eval
