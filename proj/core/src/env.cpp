#include "samarl/env.hpp"

#include <algorithm>
#include <cmath>

namespace samarl {

namespace {

constexpr int kCollisionSubsteps = 4;  // anti-tunneling at dt = 0.25 s
constexpr double kDiscomfortDist = 0.45;

double goal_distance(const AgentState& a) { return (a.prv.goal - a.pub.p).norm(); }

bool robot_reached(const AgentState& a) { return goal_distance(a) < a.pub.rho; }

double min_human_surface_distance(const World& w, int robot_id) {
  double best = std::numeric_limits<double>::infinity();
  const auto& r = w.agents[robot_id];
  for (int j = w.n_robots(); j < static_cast<int>(w.agents.size()); ++j) {
    best = std::min(best, surface_distance(r.pub, w.agents[j].pub));
  }
  return best;
}

// Segment-interpolated pairwise overlap check between old and new positions.
void detect_collisions(const World& before, World& after) {
  const int n = static_cast<int>(after.agents.size());
  const int nr = after.n_robots();
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec2 pi0 = before.agents[i].pub.p, pi1 = after.agents[i].pub.p;
      const Vec2 pj0 = before.agents[j].pub.p, pj1 = after.agents[j].pub.p;
      const double rsum = after.agents[i].pub.rho + after.agents[j].pub.rho;
      for (int s = 1; s <= kCollisionSubsteps; ++s) {
        const double f = static_cast<double>(s) / kCollisionSubsteps;
        const Vec2 pi = pi0 + (pi1 - pi0) * f;
        const Vec2 pj = pj0 + (pj1 - pj0) * f;
        if ((pi - pj).norm() - rsum < 0.0) {
          after.collided[i] = true;
          if (j < nr) after.collided[j] = true;
          break;
        }
      }
    }
  }
}

}  // namespace

const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Running: return "Running";
    case EpisodeStatus::AllSuccess: return "AllSuccess";
    case EpisodeStatus::Collision: return "Collision";
    case EpisodeStatus::Timeout: return "Timeout";
  }
  return "?";
}

std::pair<World, std::vector<Observation>> reset(const ScenarioConfig& config,
                                                 std::uint64_t seed) {
  config.validate();
  World w;
  w.config = config;
  w.config.seed = seed;
  Rng rng(seed);
  w.agents = generate_scenario(w.config, rng);
  w.reached.assign(config.n_robots, false);
  w.collided.assign(config.n_robots, false);
  w.t = 0;
  w.t_k = 0;
  w.status = EpisodeStatus::Running;

  std::vector<Observation> obs;
  obs.reserve(config.n_robots);
  for (int i = 0; i < config.n_robots; ++i) obs.push_back(observe(w, i));
  return {std::move(w), std::move(obs)};
}

Observation observe(const World& world, int robot_id) {
  if (robot_id < 0 || robot_id >= world.n_robots())
    throw EnvUsageError("observe: invalid robot id");
  const AgentState& self = world.agents[robot_id];
  const double half_fov = world.config.fov_deg * M_PI / 360.0;

  Observation obs;
  obs.self = self;
  for (const auto& other : world.agents) {
    if (other.id == self.id) continue;
    const Vec2 rel = other.pub.p - self.pub.p;
    const double bearing = std::atan2(rel.y, rel.x);
    if (std::abs(wrap_angle(bearing - self.prv.theta)) <= half_fov) {
      obs.visible.push_back(other.pub);
      obs.visible_kinds.push_back(other.kind);
      obs.visible_ids.push_back(other.id);
    }
  }
  return obs;
}

StepResult step(World& world, const std::vector<LocalAction>& actions) {
  if (world.done()) throw EnvUsageError("step: episode already terminal");
  if (static_cast<int>(actions.size()) != world.n_robots())
    throw EnvUsageError("step: need one action per robot");

  const World before = world;
  const int nr = world.n_robots();
  const int n = static_cast<int>(world.agents.size());

  // Robots: clamp then integrate (simultaneous update from the frozen snapshot).
  for (int i = 0; i < nr; ++i) {
    AgentState& a = world.agents[i];
    if (world.reached[i]) {
      a.pub.v = Vec2{0.0, 0.0};  // brakes applied at the goal
      continue;
    }
    LocalAction clamped = actions[i];
    const double a_norm = std::hypot(clamped.ax, clamped.ay);
    const double a_eff = std::min(a_norm, world.config.limits.a_max);
    const double speed_next_lb =
        std::max(0.0, a.pub.v.norm() - a_eff * world.config.dt);
    clamped = clamp_action(clamped, a.prv.theta, speed_next_lb, world.config.dt,
                           world.config.limits);
    BodyState body{a.pub.p, a.pub.v, a.prv.theta};
    body = integrate(body, clamped, world.config.dt, world.config.limits);
    a.pub.p = body.p;
    a.pub.v = body.v;
    a.prv.theta = body.theta;
  }

  // Humans: ORCA against humans only (robots are invisible to them).
  std::vector<Vec2> human_targets(n - nr);
  for (int j = nr; j < n; ++j) {
    std::vector<PublicState> others;
    for (int k = nr; k < n; ++k) {
      if (k != j) others.push_back(before.agents[k].pub);
    }
    human_targets[j - nr] =
        human_policy(before.agents[j], others, world.human_params, world.config.dt);
  }
  for (int j = nr; j < n; ++j) {
    AgentState& h = world.agents[j];
    h.pub = integrate_human(h.pub, human_targets[j - nr], h.prv.v_pref, world.config.dt);
  }

  world.t += 1;
  world.t_k = world.t / world.config.macro_period;

  detect_collisions(before, world);
  for (int i = 0; i < nr; ++i) {
    if (!world.reached[i] && robot_reached(world.agents[i])) world.reached[i] = true;
  }

  StepResult result;
  result.rewards.resize(nr);
  for (int i = 0; i < nr; ++i) result.rewards[i] = reward(before, world, i);

  const bool any_collision =
      std::any_of(world.collided.begin(), world.collided.end(), [](bool c) { return c; });
  const bool all_reached =
      std::all_of(world.reached.begin(), world.reached.end(), [](bool r) { return r; });
  if (any_collision) {
    world.status = EpisodeStatus::Collision;
  } else if (all_reached) {
    world.status = EpisodeStatus::AllSuccess;
  } else if (world.t >= world.config.max_steps()) {
    world.status = EpisodeStatus::Timeout;
  }
  result.status = world.status;

  result.observations.reserve(nr);
  result.min_human_distance.resize(nr);
  result.goal_distance.resize(nr);
  for (int i = 0; i < nr; ++i) {
    result.observations.push_back(observe(world, i));
    result.min_human_distance[i] = min_human_surface_distance(world, i);
    result.goal_distance[i] = goal_distance(world.agents[i]);
  }
  return result;
}

double reward(const World& before, const World& after, int robot_id) {
  if (robot_id < 0 || robot_id >= after.n_robots())
    throw EnvUsageError("reward: invalid robot id");

  const bool all_reached =
      std::all_of(after.reached.begin(), after.reached.end(), [](bool r) { return r; });
  if (all_reached) return 5.0;
  if (after.reached[robot_id]) return 10.0;
  if (after.collided[robot_id]) return -20.0;

  const double dis_h = min_human_surface_distance(after, robot_id);
  if (dis_h <= kDiscomfortDist) return std::max(-1.0 / std::max(dis_h, 1e-9), -5.0);

  return 2.0 * (goal_distance(before.agents[robot_id]) - goal_distance(after.agents[robot_id]));
}

double macro_reward(const std::vector<double>& la_rewards, double gamma) {
  if (la_rewards.empty()) throw EnvUsageError("macro_reward: empty reward list");
  double sum = 0.0, g = 1.0;
  for (double r : la_rewards) {
    sum += g * r;
    g *= gamma;
  }
  return sum;
}

}  // namespace samarl
