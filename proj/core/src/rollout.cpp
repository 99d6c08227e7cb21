#include "samarl/rollout.hpp"

#include <numeric>

namespace samarl::marl {

using nn::EncoderInput;
using nn::Groups;
using nn::Mat;
using nn::Tape;
using nn::Var;

Observation full_observe(const World& world, int robot_id) {
  Observation obs;
  obs.self = world.agents[robot_id];
  for (const auto& other : world.agents) {
    if (other.id == obs.self.id) continue;
    obs.visible.push_back(other.pub);
    obs.visible_kinds.push_back(other.kind);
    obs.visible_ids.push_back(other.id);
  }
  return obs;
}

namespace {

Eigen::RowVectorXd waypoint_context(const std::vector<Vec2>& waypoints,
                                    const std::vector<AgentState>& robots,
                                    const std::vector<bool>& active, int self,
                                    double goal_frame_angle) {
  Eigen::RowVectorXd ctx = Eigen::RowVectorXd::Zero(2);
  int count = 0;
  for (std::size_t j = 0; j < waypoints.size(); ++j) {
    if (static_cast<int>(j) == self || !active[j]) continue;
    const Vec2 off = (waypoints[j] - robots[j].pub.p).rotated(-goal_frame_angle);
    ctx(0) += off.x;
    ctx(1) += off.y;
    ++count;
  }
  if (count > 0) ctx /= static_cast<double>(count);
  return ctx;
}

}  // namespace

RolloutBuffer collect_rollout(const ScenarioConfig& env_cfg, const nn::PolicyNet& net,
                              nn::ParamStore& actor, nn::ParamStore& critic,
                              const TrainConfig& tcfg, std::mt19937_64& rng,
                              int n_episodes, bool deterministic) {
  RolloutBuffer buf;
  const int T = env_cfg.macro_period;
  const double gamma_ma = std::pow(tcfg.gamma, T);
  int step_key = 0, epoch_key = 0;
  double reward_total = 0.0;
  int success_count = 0;

  for (int ep = 0; ep < n_episodes; ++ep) {
    auto [world, obs] = reset(env_cfg, rng());
    const int nr = world.n_robots();
    std::vector<HistoryBuffer> hist_actor(nr), hist_critic(nr);
    for (int i = 0; i < nr; ++i) {
      hist_actor[i].window = net.config().encoder.history;
      hist_critic[i].window = net.config().encoder.history;
      hist_actor[i].push(obs[i]);
      hist_critic[i].push(full_observe(world, i));
    }

    std::vector<bool> active(nr, true);
    std::vector<Vec2> waypoints(nr);
    std::vector<std::vector<double>> epoch_rewards(nr);
    std::vector<int> pending_ma(nr, -1);
    std::vector<std::vector<std::size_t>> la_rows(nr);
    std::vector<std::vector<std::size_t>> ma_rows(nr);

    while (!world.done()) {
      std::vector<int> act_ids;
      for (int i = 0; i < nr; ++i)
        if (active[i]) act_ids.push_back(i);
      if (act_ids.empty()) break;  // defensive; world would be terminal

      const int B = static_cast<int>(act_ids.size());
      std::vector<EncoderInput> a_in, c_in;
      Mat self_f(B, nn::kSelfFeatDim);
      std::vector<Observation> cur_obs;
      for (int b = 0; b < B; ++b) {
        const int i = act_ids[b];
        a_in.push_back(nn::build_encoder_input(hist_actor[i], net.config().encoder));
        c_in.push_back(nn::build_encoder_input(hist_critic[i], net.config().encoder));
        cur_obs.push_back(hist_actor[i].entries.back());
        self_f.row(b) = nn::self_features(cur_obs.back());
      }

      Groups one_group{std::vector<int>{}};
      std::vector<int> group_of_row(B, 0);
      for (int b = 0; b < B; ++b) one_group[0].push_back(b);

      Tape tape;
      Var y = net.actor_features(tape, actor, a_in);
      Var y_crit = net.critic_features(tape, critic, c_in);

      const bool epoch_start = (world.t % T == 0);
      if (epoch_start) {
        Var ma_mu = net.ma_mean(tape, actor, y, self_f);
        Var ma_v = net.ma_value(tape, critic, y_crit, one_group, group_of_row, self_f);
        const Mat& mu = tape.value(ma_mu);
        const Mat& ls = actor.get("ma_actor/log_std").value;
        for (int b = 0; b < B; ++b) {
          const int i = act_ids[b];
          auto s = net.sample_macro(mu.row(b), ls.row(0), cur_obs[b], rng, deterministic);
          waypoints[i] = s.waypoint_world;
          MaRecord rec;
          rec.actor_input = a_in[b];
          rec.critic_input = c_in[b];
          rec.self_feats = self_f.row(b);
          rec.pre_action = s.pre;
          rec.logp = s.logp;
          rec.value = tape.value(ma_v)(b, 0);
          rec.robot = i;
          rec.epoch_key = epoch_key;
          pending_ma[i] = static_cast<int>(buf.ma.size());
          ma_rows[i].push_back(buf.ma.size());
          buf.ma.push_back(std::move(rec));
          epoch_rewards[i].clear();
        }
        ++epoch_key;
      }

      Mat wp_f(B, nn::kWaypointFeatDim);
      Mat wp_ctx(B, 2);
      for (int b = 0; b < B; ++b) {
        const int i = act_ids[b];
        wp_f.row(b) = nn::waypoint_features(cur_obs[b], waypoints[i]);
        const Vec2 to_goal = cur_obs[b].self.prv.goal - cur_obs[b].self.pub.p;
        wp_ctx.row(b) = waypoint_context(waypoints, world.agents, active, i,
                                         std::atan2(to_goal.y, to_goal.x));
      }
      Mat la_extra(B, nn::kSelfFeatDim + nn::kWaypointFeatDim + 2);
      la_extra << self_f, wp_f, wp_ctx;

      Var la_mu = net.la_mean(tape, actor, y, Mat(la_extra.leftCols(
                                                 nn::kSelfFeatDim + nn::kWaypointFeatDim)));
      Var la_v = net.la_value(tape, critic, y_crit, one_group, group_of_row, la_extra);

      std::vector<LocalAction> actions(nr);
      std::vector<std::size_t> new_rows(B);
      const Mat& mu = tape.value(la_mu);
      const Mat& ls = actor.get("la_actor/log_std").value;
      for (int b = 0; b < B; ++b) {
        const int i = act_ids[b];
        auto s = net.sample_local(mu.row(b), ls.row(0), cur_obs[b], env_cfg.limits, rng,
                                  deterministic);
        actions[i] = s.action;
        LaRecord rec;
        rec.actor_input = a_in[b];
        rec.critic_input = c_in[b];
        rec.self_feats = self_f.row(b);
        rec.wp_feats = wp_f.row(b);
        rec.wp_ctx = wp_ctx.row(b);
        rec.pre_action = s.pre;
        rec.logp = s.logp;
        rec.value = tape.value(la_v)(b, 0);
        rec.robot = i;
        rec.step_key = step_key;
        new_rows[b] = buf.la.size();
        la_rows[i].push_back(buf.la.size());
        buf.la.push_back(std::move(rec));
      }
      ++step_key;

      StepResult result = step(world, actions);
      const bool epoch_end = (world.t % T == 0) || world.done();
      for (int b = 0; b < B; ++b) {
        const int i = act_ids[b];
        LaRecord& rec = buf.la[new_rows[b]];
        rec.reward = result.rewards[i];
        reward_total += result.rewards[i] / nr;
        epoch_rewards[i].push_back(result.rewards[i]);
        const bool finished = world.reached[i] || world.done();
        rec.done = finished;
        if (finished || epoch_end) {
          MaRecord& ma = buf.ma[pending_ma[i]];
          ma.reward = macro_reward(epoch_rewards[i], tcfg.gamma);
          ma.done = finished;
          pending_ma[i] = -1;
          epoch_rewards[i].clear();
        }
        if (world.reached[i]) active[i] = false;
      }
      for (int i = 0; i < nr; ++i) {
        hist_actor[i].push(result.observations[i]);
        hist_critic[i].push(full_observe(world, i));
      }
    }

    // Per-robot GAE over both timelines; every sequence ends terminal.
    for (int i = 0; i < nr; ++i) {
      if (!la_rows[i].empty()) {
        std::vector<double> r, v;
        std::vector<bool> d;
        for (auto idx : la_rows[i]) {
          r.push_back(buf.la[idx].reward);
          v.push_back(buf.la[idx].value);
          d.push_back(buf.la[idx].done);
        }
        if (!d.empty()) d.back() = true;
        auto g = gae(r, v, 0.0, tcfg.gamma, tcfg.gae_lambda, d);
        for (std::size_t k = 0; k < la_rows[i].size(); ++k) {
          buf.la[la_rows[i][k]].advantage = g.advantages[k];
          buf.la[la_rows[i][k]].ret = g.returns[k];
        }
      }
      if (!ma_rows[i].empty()) {
        std::vector<double> r, v;
        std::vector<bool> d;
        for (auto idx : ma_rows[i]) {
          r.push_back(buf.ma[idx].reward);
          v.push_back(buf.ma[idx].value);
          d.push_back(buf.ma[idx].done);
        }
        if (!d.empty()) d.back() = true;
        auto g = gae(r, v, 0.0, gamma_ma, tcfg.gae_lambda, d);
        for (std::size_t k = 0; k < ma_rows[i].size(); ++k) {
          buf.ma[ma_rows[i][k]].advantage = g.advantages[k];
          buf.ma[ma_rows[i][k]].ret = g.returns[k];
        }
      }
    }

    buf.statuses.push_back(world.status);
    if (world.status == EpisodeStatus::AllSuccess) ++success_count;
    ++buf.episodes;
  }

  buf.mean_episode_reward = buf.episodes > 0 ? reward_total / buf.episodes : 0.0;
  buf.success_fraction =
      buf.episodes > 0 ? static_cast<double>(success_count) / buf.episodes : 0.0;
  return buf;
}

}  // namespace samarl::marl
