#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "samarl/kinematics.hpp"
#include "samarl/orca.hpp"
#include "samarl/scenario.hpp"
#include "samarl/types.hpp"

namespace samarl {

enum class EpisodeStatus : std::uint8_t { Running, AllSuccess, Collision, Timeout };

const char* to_string(EpisodeStatus s);

// Surface distance between two discs (negative when overlapping).
inline double surface_distance(const PublicState& a, const PublicState& b) {
  return (a.p - b.p).norm() - a.rho - b.rho;
}

/// One robot's FOV-filtered view of the world.
struct Observation {
  AgentState self;  // full state, private fields included
  std::vector<PublicState> visible;
  std::vector<AgentKind> visible_kinds;
  std::vector<int> visible_ids;
};

/// Sliding window of the last L observations for one robot.
struct HistoryBuffer {
  int window = 5;
  std::deque<Observation> entries;  // oldest -> newest

  void push(Observation obs) {
    entries.push_back(std::move(obs));
    while (static_cast<int>(entries.size()) > window) entries.pop_front();
  }
  void clear() { entries.clear(); }
  int size() const { return static_cast<int>(entries.size()); }
};

struct StepResult {
  std::vector<double> rewards;            // per robot
  std::vector<Observation> observations;  // per robot
  EpisodeStatus status = EpisodeStatus::Running;
  std::vector<double> min_human_distance;  // per robot, surface distance
  std::vector<double> goal_distance;       // per robot, center distance
};

struct World {
  std::vector<AgentState> agents;  // robots first, then humans
  int t = 0;    // LA step index
  int t_k = 0;  // decision epoch index
  ScenarioConfig config;
  std::vector<bool> reached;    // per robot, monotone
  std::vector<bool> collided;   // per robot, set at the collision step
  EpisodeStatus status = EpisodeStatus::Running;
  OrcaParams human_params;

  int n_robots() const { return config.n_robots; }
  const AgentState& robot(int i) const { return agents[i]; }
  bool done() const { return status != EpisodeStatus::Running; }
};

class EnvUsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::pair<World, std::vector<Observation>> reset(const ScenarioConfig& config,
                                                 std::uint64_t seed);

/// FOV sector check is closed at the boundary; range is unlimited.
Observation observe(const World& world, int robot_id);

/// Advances every agent one LA step; updates status and epoch counters.
StepResult step(World& world, const std::vector<LocalAction>& actions);

/// Individual per-step reward, exact branch order: all-success 5, own-success
/// 10, collision -20, discomfort max(-1/dis, -5) for dis <= 0.45, else
/// progress 2 * (d_goal_prev - d_goal_now).
double reward(const World& before, const World& after, int robot_id);

/// Discounted sum of LA rewards over one decision epoch.
double macro_reward(const std::vector<double>& la_rewards, double gamma);

}  // namespace samarl
