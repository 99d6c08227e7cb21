#include "samarl/trainer.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace samarl::marl {

using nn::Groups;
using nn::Mat;
using nn::Tape;
using nn::Var;

Trainer::Trainer(ScenarioConfig env_cfg, nn::PolicyConfig pcfg, TrainConfig tcfg)
    : env_cfg_(std::move(env_cfg)),
      net_(pcfg),
      tcfg_(tcfg),
      actor_opt_(tcfg.learning_rate),
      critic_opt_(tcfg.learning_rate),
      rng_(tcfg.seed) {
  env_cfg_.validate();
  net_.init_params(actor_, critic_, rng_);
}

namespace {

void normalize(std::vector<double>& adv) {
  if (adv.empty()) return;
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= adv.size();
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / adv.size());
  for (double& a : adv) a = (a - mean) / (sd + 1e-8);
}

/// Groups batch rows by an integer key (world step or decision epoch).
template <typename Rec>
void key_groups(const std::vector<Rec>& recs, int Rec::* key, Groups& groups,
                std::vector<int>& group_of_row) {
  std::map<int, int> index;
  groups.clear();
  group_of_row.assign(recs.size(), 0);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    auto [it, fresh] = index.try_emplace(recs[i].*key, static_cast<int>(groups.size()));
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(static_cast<int>(i));
    group_of_row[i] = it->second;
  }
}

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw TrainerError(std::string(what) + " is not finite");
}

}  // namespace

UpdateStats Trainer::update(const RolloutBuffer& buf) {
  if (buf.la.empty()) throw TrainerError("empty rollout buffer");
  const std::size_t nla = buf.la.size(), nma = buf.ma.size();

  std::vector<double> adv_la(nla), adv_ma(nma);
  for (std::size_t i = 0; i < nla; ++i) adv_la[i] = buf.la[i].advantage;
  for (std::size_t i = 0; i < nma; ++i) adv_ma[i] = buf.ma[i].advantage;
  normalize(adv_la);
  normalize(adv_ma);

  // Constant batch tensors shared across PPO epochs.
  std::vector<nn::EncoderInput> la_act_in, la_crit_in, ma_act_in, ma_crit_in;
  Mat la_self(nla, nn::kSelfFeatDim), ma_self(nma, nn::kSelfFeatDim);
  Mat la_extra(nla, nn::kSelfFeatDim + nn::kWaypointFeatDim + 2);
  Mat la_pre(nla, 3), ma_pre(nma, 2);
  Mat la_oldlogp(nla, 1), ma_oldlogp(nma, 1);
  Mat la_adv(nla, 1), ma_adv(nma, 1);
  Mat la_oldv(nla, 1), ma_oldv(nma, 1);
  Mat la_ret(nla, 1), ma_ret(nma, 1);
  for (std::size_t i = 0; i < nla; ++i) {
    const LaRecord& r = buf.la[i];
    la_act_in.push_back(r.actor_input);
    la_crit_in.push_back(r.critic_input);
    la_self.row(i) = r.self_feats;
    la_extra.row(i) << r.self_feats, r.wp_feats, r.wp_ctx;
    la_pre.row(i) = r.pre_action;
    la_oldlogp(i, 0) = r.logp;
    la_adv(i, 0) = adv_la[i];
    la_oldv(i, 0) = r.value;
    la_ret(i, 0) = r.ret;
  }
  for (std::size_t i = 0; i < nma; ++i) {
    const MaRecord& r = buf.ma[i];
    ma_act_in.push_back(r.actor_input);
    ma_crit_in.push_back(r.critic_input);
    ma_self.row(i) = r.self_feats;
    ma_pre.row(i) = r.pre_action;
    ma_oldlogp(i, 0) = r.logp;
    ma_adv(i, 0) = adv_ma[i];
    ma_oldv(i, 0) = r.value;
    ma_ret(i, 0) = r.ret;
  }
  Groups la_groups, ma_groups;
  std::vector<int> la_row_group, ma_row_group;
  key_groups(buf.la, &LaRecord::step_key, la_groups, la_row_group);
  key_groups(buf.ma, &MaRecord::epoch_key, ma_groups, ma_row_group);
  const Mat la_self_wp = la_extra.leftCols(nn::kSelfFeatDim + nn::kWaypointFeatDim);

  UpdateStats stats;
  for (int epoch = 0; epoch < tcfg_.ppo_epochs; ++epoch) {
    {  // actor: joint LA + MA surrogate through the shared encoder
      Tape t;
      Var y_la = net_.actor_features(t, actor_, la_act_in);
      Var la_mu = net_.la_mean(t, actor_, y_la, la_self_wp);
      Var la_lp = net_.gaussian_logp(t, la_mu, net_.la_log_std(t, actor_), la_pre);
      Var la_ent = net_.gaussian_entropy(t, net_.la_log_std(t, actor_));
      Var la_loss = actor_loss_graph(t, la_lp, la_oldlogp, la_adv, la_ent,
                                     tcfg_.clip, tcfg_.entropy_coef);

      Var y_ma = net_.actor_features(t, actor_, ma_act_in);
      Var ma_mu = net_.ma_mean(t, actor_, y_ma, ma_self);
      Var ma_lp = net_.gaussian_logp(t, ma_mu, net_.ma_log_std(t, actor_), ma_pre);
      Var ma_ent = net_.gaussian_entropy(t, net_.ma_log_std(t, actor_));
      Var ma_loss = actor_loss_graph(t, ma_lp, ma_oldlogp, ma_adv, ma_ent,
                                     tcfg_.clip, tcfg_.entropy_coef);

      Var total = t.add(la_loss, ma_loss);
      stats.actor_loss_la = t.value(la_loss)(0, 0);
      stats.actor_loss_ma = t.value(ma_loss)(0, 0);
      stats.entropy_la = t.value(la_ent)(0, 0);
      stats.entropy_ma = t.value(ma_ent)(0, 0);
      check_finite(stats.actor_loss_la, "LA actor loss");
      check_finite(stats.actor_loss_ma, "MA actor loss");
      actor_.zero_grad();
      t.backward(total);
      stats.actor_grad_norm = actor_.grad_norm();
      check_finite(stats.actor_grad_norm, "actor grad norm");
      actor_.clip_grad_norm(tcfg_.max_grad_norm);
      actor_opt_.step(actor_);
    }
    {  // critic: joint LA + MA clipped value loss
      Tape t;
      Var y_la = net_.critic_features(t, critic_, la_crit_in);
      Var v_la = net_.la_value(t, critic_, y_la, la_groups, la_row_group, la_extra);
      Var la_loss = critic_loss_graph(t, v_la, la_oldv, la_ret, tcfg_.value_clip);

      Var y_ma = net_.critic_features(t, critic_, ma_crit_in);
      Var v_ma = net_.ma_value(t, critic_, y_ma, ma_groups, ma_row_group, ma_self);
      Var ma_loss = critic_loss_graph(t, v_ma, ma_oldv, ma_ret, tcfg_.value_clip);

      Var total = t.add(la_loss, ma_loss);
      stats.critic_loss_la = t.value(la_loss)(0, 0);
      stats.critic_loss_ma = t.value(ma_loss)(0, 0);
      check_finite(stats.critic_loss_la, "LA critic loss");
      check_finite(stats.critic_loss_ma, "MA critic loss");
      critic_.zero_grad();
      t.backward(total);
      stats.critic_grad_norm = critic_.grad_norm();
      check_finite(stats.critic_grad_norm, "critic grad norm");
      critic_.clip_grad_norm(tcfg_.max_grad_norm);
      critic_opt_.step(critic_);
    }
  }
  return stats;
}

void Trainer::train(const std::optional<std::string>& diagnostics_csv,
                    const ProgressCallback& on_update) {
  std::ofstream csv;
  if (diagnostics_csv) {
    csv.open(*diagnostics_csv);
    if (!csv) throw TrainerError("cannot open diagnostics CSV: " + *diagnostics_csv);
    csv << "update,episodes,mean_episode_reward,success_fraction,"
           "actor_loss_la,actor_loss_ma,critic_loss_la,critic_loss_ma,"
           "entropy_la,entropy_ma,actor_grad_norm,critic_grad_norm\n";
  }

  int episodes_done = 0;
  int update_idx = 0;
  while (episodes_done < tcfg_.episodes) {
    const int n = std::min(tcfg_.batch_episodes, tcfg_.episodes - episodes_done);
    RolloutBuffer buf = collect_rollout(env_cfg_, net_, actor_, critic_, tcfg_, rng_, n);
    UpdateStats stats = update(buf);
    episodes_done += buf.episodes;
    ++update_idx;

    if (csv.is_open()) {
      csv << update_idx << ',' << episodes_done << ',' << buf.mean_episode_reward << ','
          << buf.success_fraction << ',' << stats.actor_loss_la << ','
          << stats.actor_loss_ma << ',' << stats.critic_loss_la << ','
          << stats.critic_loss_ma << ',' << stats.entropy_la << ',' << stats.entropy_ma
          << ',' << stats.actor_grad_norm << ',' << stats.critic_grad_norm << '\n';
      csv.flush();
    }
    if (on_update) {
      TrainProgress prog;
      prog.update = update_idx;
      prog.episodes_done = episodes_done;
      prog.mean_episode_reward = buf.mean_episode_reward;
      prog.success_fraction = buf.success_fraction;
      prog.stats = stats;
      if (on_update(prog)) break;
    }
  }
}

}  // namespace samarl::marl
