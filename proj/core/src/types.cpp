#include "samarl/types.hpp"

#include <set>

#include <json.hpp>

namespace samarl {

double wrap_angle(double theta) {
  double w = std::fmod(theta, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  if (w > M_PI) w -= 2.0 * M_PI;
  return w;
}

void ScenarioConfig::validate() const {
  if (n_robots < 1) throw ConfigError("n_robots must be >= 1");
  if (n_humans < 0) throw ConfigError("n_humans must be >= 0");
  if (!(fov_deg > 0.0 && fov_deg <= 360.0)) throw ConfigError("fov_deg must be in (0, 360]");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (macro_period < 1) throw ConfigError("macro_period must be >= 1");
  if (t_k_max < 1) throw ConfigError("t_k_max must be >= 1");
  if (!(circle_radius > 0.0)) throw ConfigError("circle_radius must be > 0");
  if (!(human_radius > 0.0 && robot_radius > 0.0)) throw ConfigError("radii must be > 0");
  if (!(v_pref_min > 0.0 && v_pref_max >= v_pref_min)) throw ConfigError("invalid v_pref range");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0, 1]");
  if (!(limits.a_max > 0.0 && limits.dtheta_max > 0.0 && limits.r_min > 0.0 && limits.v_max > 0.0))
    throw ConfigError("kinematic limits must be positive");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "n_robots", "n_humans", "circle_radius", "fov_deg", "dt", "t_k_max",
    "macro_period", "seed", "limits", "human_radius", "robot_radius",
    "v_pref_range", "gamma"};
const std::set<std::string> kKnownLimitKeys = {"a_max", "dtheta_max", "r_min", "v_max"};

}  // namespace

ScenarioConfig scenario_config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key: " + key);
  }
  ScenarioConfig cfg;
  try {
    if (j.contains("n_robots")) cfg.n_robots = j["n_robots"].get<int>();
    if (j.contains("n_humans")) cfg.n_humans = j["n_humans"].get<int>();
    if (j.contains("circle_radius")) cfg.circle_radius = j["circle_radius"].get<double>();
    if (j.contains("fov_deg")) cfg.fov_deg = j["fov_deg"].get<double>();
    if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
    if (j.contains("t_k_max")) cfg.t_k_max = j["t_k_max"].get<int>();
    if (j.contains("macro_period")) cfg.macro_period = j["macro_period"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("human_radius")) cfg.human_radius = j["human_radius"].get<double>();
    if (j.contains("robot_radius")) cfg.robot_radius = j["robot_radius"].get<double>();
    if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
    if (j.contains("v_pref_range")) {
      const auto& r = j["v_pref_range"];
      if (!r.is_array() || r.size() != 2) throw ConfigError("v_pref_range must be [min, max]");
      cfg.v_pref_min = r[0].get<double>();
      cfg.v_pref_max = r[1].get<double>();
    }
    if (j.contains("limits")) {
      const auto& l = j["limits"];
      if (!l.is_object()) throw ConfigError("limits must be an object");
      for (const auto& [key, _] : l.items()) {
        if (!kKnownLimitKeys.count(key)) throw ConfigError("unknown limits key: " + key);
      }
      if (l.contains("a_max")) cfg.limits.a_max = l["a_max"].get<double>();
      if (l.contains("dtheta_max")) cfg.limits.dtheta_max = l["dtheta_max"].get<double>();
      if (l.contains("r_min")) cfg.limits.r_min = l["r_min"].get<double>();
      if (l.contains("v_max")) cfg.limits.v_max = l["v_max"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string scenario_config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["n_robots"] = cfg.n_robots;
  j["n_humans"] = cfg.n_humans;
  j["circle_radius"] = cfg.circle_radius;
  j["fov_deg"] = cfg.fov_deg;
  j["dt"] = cfg.dt;
  j["t_k_max"] = cfg.t_k_max;
  j["macro_period"] = cfg.macro_period;
  j["seed"] = cfg.seed;
  j["human_radius"] = cfg.human_radius;
  j["robot_radius"] = cfg.robot_radius;
  j["v_pref_range"] = {cfg.v_pref_min, cfg.v_pref_max};
  j["gamma"] = cfg.gamma;
  j["limits"] = {{"a_max", cfg.limits.a_max},
                 {"dtheta_max", cfg.limits.dtheta_max},
                 {"r_min", cfg.limits.r_min},
                 {"v_max", cfg.limits.v_max}};
  return j.dump(2);
}

}  // namespace samarl
