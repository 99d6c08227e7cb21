#include "samarl/scenario.hpp"

namespace samarl {

namespace {

constexpr double kClearance = 0.2;  // extra separation required at spawn
constexpr int kMaxRetries = 2000;

bool overlaps(const std::vector<AgentState>& placed, const Vec2& p, double rho) {
  for (const auto& a : placed) {
    if ((a.pub.p - p).norm() <= a.pub.rho + rho + kClearance) return true;
  }
  return false;
}

AgentState make_agent(AgentKind kind, int id, const ScenarioConfig& cfg, Rng& rng,
                      const std::vector<AgentState>& placed) {
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);  // 1 m box on the goal
  std::uniform_real_distribution<double> vp(cfg.v_pref_min, cfg.v_pref_max);
  const double rho = (kind == AgentKind::Robot) ? cfg.robot_radius : cfg.human_radius;

  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    double phi = angle_dist(rng);
    Vec2 start{cfg.circle_radius * std::cos(phi), cfg.circle_radius * std::sin(phi)};
    Vec2 goal{-start.x + jitter(rng), -start.y + jitter(rng)};
    if (overlaps(placed, start, rho)) continue;

    AgentState a;
    a.kind = kind;
    a.id = id;
    a.pub.p = start;
    a.pub.v = Vec2{0.0, 0.0};
    a.pub.rho = rho;
    a.prv.goal = goal;
    a.prv.v_pref = vp(rng);
    a.prv.theta = std::atan2(goal.y - start.y, goal.x - start.x);
    return a;
  }
  throw ScenarioError("scenario generation failed: no collision-free placement after " +
                      std::to_string(kMaxRetries) + " attempts");
}

}  // namespace

std::vector<AgentState> generate_scenario(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  std::vector<AgentState> agents;
  agents.reserve(config.n_robots + config.n_humans);
  int id = 0;
  for (int i = 0; i < config.n_robots; ++i)
    agents.push_back(make_agent(AgentKind::Robot, id++, config, rng, agents));
  for (int i = 0; i < config.n_humans; ++i)
    agents.push_back(make_agent(AgentKind::Human, id++, config, rng, agents));
  return agents;
}

}  // namespace samarl
