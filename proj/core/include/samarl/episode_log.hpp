#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "samarl/env.hpp"

namespace samarl {

inline constexpr int kEpisodeLogVersion = 1;

/// One recorded LA step.
struct LoggedStep {
  int t = 0;
  std::vector<AgentState> agents;
  std::vector<LocalAction> actions;  // per robot
  std::vector<double> rewards;       // per robot
  EpisodeStatus status = EpisodeStatus::Running;
};

struct EpisodeLog {
  ScenarioConfig config;
  std::vector<AgentState> initial_agents;
  std::vector<LoggedStep> steps;
  EpisodeStatus final_status = EpisodeStatus::Running;
};

class LogParseError : public std::runtime_error {
 public:
  LogParseError(int line, const std::string& what)
      : std::runtime_error("episode log line " + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

/// JSON-lines: one header object, then one object per step.
void write_episode_log(std::ostream& out, const EpisodeLog& log);
void write_episode_log(const std::string& path, const EpisodeLog& log);
EpisodeLog read_episode_log(std::istream& in);
EpisodeLog read_episode_log_file(const std::string& path);

}  // namespace samarl
