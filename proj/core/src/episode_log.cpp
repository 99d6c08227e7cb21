#include "samarl/episode_log.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace samarl {

namespace {

using nlohmann::json;

json agent_to_json(const AgentState& a) {
  return json{{"id", a.id},
              {"kind", a.kind == AgentKind::Robot ? "robot" : "human"},
              {"px", a.pub.p.x},  {"py", a.pub.p.y},
              {"vx", a.pub.v.x},  {"vy", a.pub.v.y},
              {"rho", a.pub.rho},
              {"gx", a.prv.goal.x}, {"gy", a.prv.goal.y},
              {"v_pref", a.prv.v_pref}, {"theta", a.prv.theta}};
}

AgentState agent_from_json(const json& j) {
  AgentState a;
  a.id = j.at("id").get<int>();
  a.kind = j.at("kind").get<std::string>() == "robot" ? AgentKind::Robot : AgentKind::Human;
  a.pub.p = {j.at("px").get<double>(), j.at("py").get<double>()};
  a.pub.v = {j.at("vx").get<double>(), j.at("vy").get<double>()};
  a.pub.rho = j.at("rho").get<double>();
  a.prv.goal = {j.at("gx").get<double>(), j.at("gy").get<double>()};
  a.prv.v_pref = j.at("v_pref").get<double>();
  a.prv.theta = j.at("theta").get<double>();
  return a;
}

EpisodeStatus status_from_string(const std::string& s) {
  if (s == "Running") return EpisodeStatus::Running;
  if (s == "AllSuccess") return EpisodeStatus::AllSuccess;
  if (s == "Collision") return EpisodeStatus::Collision;
  if (s == "Timeout") return EpisodeStatus::Timeout;
  throw std::runtime_error("unknown status: " + s);
}

}  // namespace

void write_episode_log(std::ostream& out, const EpisodeLog& log) {
  json header{{"schema", "samarl-episode"},
              {"version", kEpisodeLogVersion},
              {"config", json::parse(scenario_config_to_json(log.config))},
              {"final_status", to_string(log.final_status)}};
  json init = json::array();
  for (const auto& a : log.initial_agents) init.push_back(agent_to_json(a));
  header["initial_agents"] = init;
  out << header.dump() << "\n";

  for (const auto& s : log.steps) {
    json js{{"t", s.t}, {"status", to_string(s.status)}};
    json agents = json::array();
    for (const auto& a : s.agents) agents.push_back(agent_to_json(a));
    js["agents"] = agents;
    json actions = json::array();
    for (const auto& a : s.actions) actions.push_back({{"ax", a.ax}, {"ay", a.ay}, {"theta", a.theta}});
    js["actions"] = actions;
    js["rewards"] = s.rewards;
    out << js.dump() << "\n";
  }
}

void write_episode_log(const std::string& path, const EpisodeLog& log) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open log for writing: " + path);
  write_episode_log(f, log);
}

EpisodeLog read_episode_log(std::istream& in) {
  EpisodeLog log;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw LogParseError(line_no, e.what());
    }
    try {
      if (!have_header) {
        if (j.value("schema", "") != "samarl-episode")
          throw std::runtime_error("missing samarl-episode schema marker");
        if (j.at("version").get<int>() != kEpisodeLogVersion)
          throw std::runtime_error("unsupported log version");
        log.config = scenario_config_from_json(j.at("config").dump());
        log.final_status = status_from_string(j.at("final_status").get<std::string>());
        for (const auto& a : j.at("initial_agents")) log.initial_agents.push_back(agent_from_json(a));
        have_header = true;
        continue;
      }
      LoggedStep s;
      s.t = j.at("t").get<int>();
      s.status = status_from_string(j.at("status").get<std::string>());
      for (const auto& a : j.at("agents")) s.agents.push_back(agent_from_json(a));
      for (const auto& a : j.at("actions"))
        s.actions.push_back(LocalAction{a.at("ax").get<double>(), a.at("ay").get<double>(),
                                        a.at("theta").get<double>()});
      s.rewards = j.at("rewards").get<std::vector<double>>();
      log.steps.push_back(std::move(s));
    } catch (const LogParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw LogParseError(line_no, e.what());
    }
  }
  if (!have_header) throw LogParseError(0, "empty log");
  return log;
}

EpisodeLog read_episode_log_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open log: " + path);
  return read_episode_log(f);
}

}  // namespace samarl
