#include "samarl/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "samarl/orca.hpp"
#include "samarl/rollout.hpp"

namespace samarl::eval {

using nn::Mat;
using nn::Tape;
using nn::Var;

PolicyKind policy_from_name(const std::string& name) {
  if (name == "SAMARL") return PolicyKind::Samarl;
  if (name == "SAMARL-PPO") return PolicyKind::SamarlPpo;
  if (name == "ORCA-baseline") return PolicyKind::OrcaBaseline;
  if (name == "Random") return PolicyKind::Random;
  throw MetricsError("unknown policy name: " + name);
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Samarl: return "SAMARL";
    case PolicyKind::SamarlPpo: return "SAMARL-PPO";
    case PolicyKind::OrcaBaseline: return "ORCA-baseline";
    case PolicyKind::Random: return "Random";
  }
  return "?";
}

namespace {

LocalAction velocity_to_action(const AgentState& a, const Vec2& v_des, double dt) {
  LocalAction act;
  act.ax = (v_des.x - a.pub.v.x) / dt;
  act.ay = (v_des.y - a.pub.v.y) / dt;
  act.theta = v_des.norm() > 1e-9 ? std::atan2(v_des.y, v_des.x) : a.prv.theta;
  return act;
}

}  // namespace

EpisodeLog run_episode(const ScenarioConfig& config, PolicyKind kind,
                       const nn::Checkpoint* ckpt, std::uint64_t seed) {
  const bool learned = kind == PolicyKind::Samarl || kind == PolicyKind::SamarlPpo;
  if (learned && ckpt == nullptr)
    throw MetricsError(policy_name(kind) + " requires a checkpoint");

  auto [world, obs] = reset(config, seed);
  const int nr = world.n_robots();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

  EpisodeLog log;
  log.config = config;
  log.initial_agents = world.agents;

  std::optional<nn::PolicyNet> net;
  nn::ParamStore actor;
  std::vector<HistoryBuffer> hist(nr);
  std::vector<Vec2> waypoints(nr);
  if (learned) {
    net.emplace(ckpt->config);
    actor = ckpt->actor;
    for (int i = 0; i < nr; ++i) {
      hist[i].window = ckpt->config.encoder.history;
      hist[i].push(obs[i]);
    }
  }

  OrcaParams orca_params;
  // The baseline tracks the holonomic ORCA velocity through the constrained
  // kinematics, so it needs a generous buffer for the tracking lag.
  orca_params.safety_margin = 0.15;
  const int T = config.macro_period;

  while (!world.done()) {
    std::vector<LocalAction> actions(nr);
    std::vector<int> act_ids;
    for (int i = 0; i < nr; ++i)
      if (!world.reached[i]) act_ids.push_back(i);

    if (learned && !act_ids.empty()) {
      const int B = static_cast<int>(act_ids.size());
      std::vector<nn::EncoderInput> inputs;
      std::vector<Observation> cur;
      Mat self_f(B, nn::kSelfFeatDim);
      for (int b = 0; b < B; ++b) {
        const int i = act_ids[b];
        inputs.push_back(nn::build_encoder_input(hist[i], ckpt->config.encoder));
        cur.push_back(hist[i].entries.back());
        self_f.row(b) = nn::self_features(cur.back());
      }
      Tape t;
      Var y = net->actor_features(t, actor, inputs);
      if (world.t % T == 0) {
        Var mu = net->ma_mean(t, actor, y, self_f);
        const Mat& ls = actor.get("ma_actor/log_std").value;
        for (int b = 0; b < B; ++b) {
          auto s = net->sample_macro(t.value(mu).row(b), ls.row(0), cur[b], rng, true);
          waypoints[act_ids[b]] = s.waypoint_world;
        }
      }
      Mat extra(B, nn::kSelfFeatDim + nn::kWaypointFeatDim);
      for (int b = 0; b < B; ++b)
        extra.row(b) << self_f.row(b), nn::waypoint_features(cur[b], waypoints[act_ids[b]]);
      Var mu = net->la_mean(t, actor, y, extra);
      const Mat& ls = actor.get("la_actor/log_std").value;
      for (int b = 0; b < B; ++b) {
        auto s = net->sample_local(t.value(mu).row(b), ls.row(0), cur[b], config.limits,
                                   rng, true);
        actions[act_ids[b]] = s.action;
      }
    } else if (kind == PolicyKind::OrcaBaseline) {
      for (int i : act_ids) {
        const Observation& o = obs[i];
        const Vec2 v_des = orca_policy(o.self, o.visible, orca_params, config.dt,
                                       std::min(o.self.prv.v_pref, config.limits.v_max));
        actions[i] = velocity_to_action(o.self, v_des, config.dt);
      }
    } else if (kind == PolicyKind::Random) {
      std::uniform_real_distribution<double> ua(-config.limits.a_max, config.limits.a_max);
      std::uniform_real_distribution<double> ut(-config.limits.dtheta_max,
                                                config.limits.dtheta_max);
      for (int i : act_ids) {
        actions[i].ax = ua(rng);
        actions[i].ay = ua(rng);
        actions[i].theta = wrap_angle(world.agents[i].prv.theta + ut(rng));
      }
    }

    StepResult result = step(world, actions);
    obs = result.observations;
    if (learned)
      for (int i = 0; i < nr; ++i) hist[i].push(obs[i]);

    LoggedStep ls;
    ls.t = world.t;
    ls.agents = world.agents;
    ls.actions = actions;
    ls.rewards = result.rewards;
    ls.status = world.status;
    log.steps.push_back(std::move(ls));
  }
  log.final_status = world.status;
  return log;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

EvalReport run_policy_eval(PolicyKind kind, const ScenarioConfig& config,
                           const std::vector<std::uint64_t>& seeds,
                           const nn::Checkpoint* ckpt,
                           const std::optional<std::string>& out_dir) {
  if (seeds.empty()) throw MetricsError("run_policy_eval: empty seed list");
  if (out_dir) std::filesystem::create_directories(*out_dir);

  EvalReport report;
  report.policy = kind;
  double nav = 0.0, path = 0.0, min_dist = 0.0, discomfort = 0.0;
  int collisions = 0, timeouts = 0;
  for (std::uint64_t seed : seeds) {
    EpisodeLog log = run_episode(config, kind, ckpt, seed);
    if (out_dir)
      write_episode_log(*out_dir + "/case_" + std::to_string(seed) + ".jsonl", log);
    EpisodeSummary s = summarize(log);
    collisions += s.collision ? 1 : 0;
    timeouts += s.timeout ? 1 : 0;
    for (const auto& r : s.robots) {
      nav += r.navigation_time;
      path += r.path_length;
      min_dist += r.min_human_surface_dist;
      discomfort += r.discomfort_fraction;
    }
    report.summaries.push_back(std::move(s));
  }
  const double n = static_cast<double>(seeds.size());
  const double per_robot = n * config.n_robots;
  report.success_rate = success_rate(report.summaries);
  std::vector<double> weights(config.n_robots, 1.0 / config.n_robots);
  report.social_score = mrsan_social_score(report.summaries, weights);

  report.csv =
      "policy,cases,success_rate,social_score_proxy,collision_rate,timeout_rate,"
      "mean_nav_time,mean_path_length,mean_min_surface_dist,mean_discomfort_fraction\n" +
      policy_name(kind) + ',' + std::to_string(seeds.size()) + ',' +
      fmt(report.success_rate) + ',' + fmt(report.social_score) + ',' +
      fmt(collisions / n) + ',' + fmt(timeouts / n) + ',' + fmt(nav / per_robot) + ',' +
      fmt(path / per_robot) + ',' + fmt(min_dist / per_robot) + ',' +
      fmt(discomfort / per_robot) + '\n';

  report.table =
      "policy:                 " + policy_name(kind) + '\n' +
      "cases:                  " + std::to_string(seeds.size()) + '\n' +
      "joint success rate:     " + fmt(report.success_rate) + '\n' +
      "social score (proxy*):  " + fmt(report.social_score) + '\n' +
      "collision rate:         " + fmt(collisions / n) + '\n' +
      "timeout rate:           " + fmt(timeouts / n) + '\n' +
      "mean nav time (s):      " + fmt(nav / per_robot) + '\n' +
      "mean path length (m):   " + fmt(path / per_robot) + '\n' +
      "mean min surf dist (m): " + fmt(min_dist / per_robot) + '\n' +
      "mean discomfort frac:   " + fmt(discomfort / per_robot) + '\n' +
      "* component score is a documented proxy, not the cited F_SC formula\n";

  if (out_dir) {
    std::ofstream(*out_dir + "/report.csv") << report.csv;
    std::ofstream(*out_dir + "/report.txt") << report.table;
  }
  return report;
}

}  // namespace samarl::eval
