#include "samarl/policy.hpp"

namespace samarl::nn {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

Mat xavier(long rows, long cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

void add_head(ParamStore& ps, const std::string& prefix, int in, int hidden, int out,
              std::mt19937_64& rng, double out_scale) {
  ps.add(prefix + "/h_w", xavier(in, hidden, rng));
  ps.add(prefix + "/h_b", Mat::Zero(1, hidden));
  ps.add(prefix + "/o_w", xavier(hidden, out, rng) * out_scale);
  ps.add(prefix + "/o_b", Mat::Zero(1, out));
}

Var linear(Tape& t, ParamStore& ps, const std::string& name, Var x) {
  Var y = t.matmul(x, t.leaf(ps.get(name + "_w")));
  return t.add_row_broadcast(y, t.leaf(ps.get(name + "_b")));
}

}  // namespace

void PolicyNet::init_params(ParamStore& actor, ParamStore& critic,
                            std::mt19937_64& rng) const {
  const int d = cfg_.encoder.d_model;
  encoder_.init_params(actor, "act", rng);
  // small output scale keeps initial actions near zero (coast / hold waypoint)
  add_head(actor, "ma_actor", d + kSelfFeatDim, cfg_.hidden, 2, rng, 0.01);
  add_head(actor, "la_actor", d + kSelfFeatDim + kWaypointFeatDim, cfg_.hidden, 3, rng, 0.01);
  actor.add("ma_actor/log_std", Mat::Constant(1, 2, cfg_.init_log_std));
  actor.add("la_actor/log_std", Mat::Constant(1, 3, cfg_.init_log_std));

  encoder_.init_params(critic, "crit", rng);
  const int ctx = cfg_.single_agent ? 0 : d;
  add_head(critic, "ma_critic", d + ctx + kSelfFeatDim, cfg_.hidden, 1, rng, 1.0);
  add_head(critic, "la_critic", d + ctx + kSelfFeatDim + kWaypointFeatDim + 2, cfg_.hidden,
           1, rng, 1.0);
}

Var PolicyNet::actor_features(Tape& t, ParamStore& actor,
                              const std::vector<EncoderInput>& batch) const {
  return encoder_.forward(t, actor, "act", batch);
}

Var PolicyNet::critic_features(Tape& t, ParamStore& critic,
                               const std::vector<EncoderInput>& batch) const {
  return encoder_.forward(t, critic, "crit", batch);
}

Var PolicyNet::mlp_head(Tape& t, ParamStore& ps, const std::string& prefix, Var input,
                        int /*out_dim*/) const {
  Var h = t.tanh(linear(t, ps, prefix + "/h", input));
  return linear(t, ps, prefix + "/o", h);
}

Var PolicyNet::ma_mean(Tape& t, ParamStore& actor, Var y, const Mat& self_feats) const {
  Var input = t.concat_cols({y, t.constant(self_feats)});
  return mlp_head(t, actor, "ma_actor", input, 2);
}

Var PolicyNet::la_mean(Tape& t, ParamStore& actor, Var y, const Mat& self_wp_feats) const {
  Var input = t.concat_cols({y, t.constant(self_wp_feats)});
  return mlp_head(t, actor, "la_actor", input, 3);
}

Var PolicyNet::ma_log_std(Tape& t, ParamStore& actor) const {
  return t.leaf(actor.get("ma_actor/log_std"));
}

Var PolicyNet::la_log_std(Tape& t, ParamStore& actor) const {
  return t.leaf(actor.get("la_actor/log_std"));
}

namespace {

Var value_head(Tape& t, ParamStore& critic, const PolicyNet& net, const std::string& name,
               Var y_crit, const Groups& step_groups, const std::vector<int>& group_of_row,
               const Mat& extra, bool single_agent, int hidden) {
  (void)hidden;
  std::vector<Var> parts;
  parts.push_back(y_crit);
  if (!single_agent) {
    Var ctx = t.segment_mean(y_crit, step_groups, static_cast<int>(step_groups.size()));
    parts.push_back(t.gather(ctx, group_of_row));
  }
  parts.push_back(t.constant(extra));
  Var input = t.concat_cols(parts);
  Var h = t.tanh(linear(t, critic, name + "/h", input));
  (void)net;
  return linear(t, critic, name + "/o", h);
}

}  // namespace

Var PolicyNet::ma_value(Tape& t, ParamStore& critic, Var y_crit, const Groups& step_groups,
                        const std::vector<int>& group_of_row, const Mat& extra) const {
  return value_head(t, critic, *this, "ma_critic", y_crit, step_groups, group_of_row, extra,
                    cfg_.single_agent, cfg_.hidden);
}

Var PolicyNet::la_value(Tape& t, ParamStore& critic, Var y_crit, const Groups& step_groups,
                        const std::vector<int>& group_of_row, const Mat& extra) const {
  return value_head(t, critic, *this, "la_critic", y_crit, step_groups, group_of_row, extra,
                    cfg_.single_agent, cfg_.hidden);
}

Var PolicyNet::gaussian_logp(Tape& t, Var mean, Var log_std, const Mat& actions) const {
  const long B = actions.rows();
  const long k = actions.cols();
  Var ones = t.constant(Mat::Ones(B, 1));
  Var ls = t.matmul(ones, log_std);  // broadcast 1xk -> Bxk
  Var diff = t.sub(t.constant(actions), mean);
  Var z = t.cwise_mul(diff, t.exp(t.neg(ls)));
  Var quad = t.scale(t.row_sum(t.square(z)), -0.5);
  Var logp = t.sub(quad, t.row_sum(ls));
  return t.add_scalar(logp, -0.5 * static_cast<double>(k) * kLog2Pi);
}

Var PolicyNet::gaussian_entropy(Tape& t, Var log_std) const {
  const long k = t.value(log_std).cols();
  return t.add_scalar(t.sum_all(log_std), 0.5 * static_cast<double>(k) * (1.0 + kLog2Pi));
}

namespace {

double plain_gaussian_logp(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& mean,
                           const Eigen::RowVectorXd& log_std) {
  double lp = -0.5 * static_cast<double>(x.size()) * kLog2Pi;
  for (long i = 0; i < x.size(); ++i) {
    const double s = std::exp(log_std(i));
    const double z = (x(i) - mean(i)) / s;
    lp += -0.5 * z * z - log_std(i);
  }
  return lp;
}

double goal_frame_angle(const Observation& obs) {
  const Vec2 to_goal = obs.self.prv.goal - obs.self.pub.p;
  return std::atan2(to_goal.y, to_goal.x);
}

}  // namespace

MacroSample PolicyNet::sample_macro(const Eigen::RowVectorXd& mean,
                                    const Eigen::RowVectorXd& log_std,
                                    const Observation& obs, std::mt19937_64& rng,
                                    bool deterministic) const {
  MacroSample s;
  s.pre = mean;
  if (!deterministic) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (long i = 0; i < s.pre.size(); ++i) s.pre(i) += std::exp(log_std(i)) * n(rng);
  }
  s.logp = plain_gaussian_logp(s.pre, mean, log_std);
  const Vec2 offset_goal_frame{cfg_.waypoint_box * std::tanh(s.pre(0)),
                               cfg_.waypoint_box * std::tanh(s.pre(1))};
  s.waypoint_world = obs.self.pub.p + offset_goal_frame.rotated(goal_frame_angle(obs));
  return s;
}

LocalSample PolicyNet::sample_local(const Eigen::RowVectorXd& mean,
                                    const Eigen::RowVectorXd& log_std,
                                    const Observation& obs, const KinematicLimits& limits,
                                    std::mt19937_64& rng, bool deterministic) const {
  LocalSample s;
  s.pre = mean;
  if (!deterministic) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (long i = 0; i < s.pre.size(); ++i) s.pre(i) += std::exp(log_std(i)) * n(rng);
  }
  s.logp = plain_gaussian_logp(s.pre, mean, log_std);
  const Vec2 a_goal_frame{limits.a_max * std::tanh(s.pre(0)),
                          limits.a_max * std::tanh(s.pre(1))};
  const Vec2 a_world = a_goal_frame.rotated(goal_frame_angle(obs));
  const double dtheta = limits.dtheta_max * std::tanh(s.pre(2));
  s.action.ax = a_world.x;
  s.action.ay = a_world.y;
  s.action.theta = wrap_angle(obs.self.prv.theta + dtheta);
  return s;
}

}  // namespace samarl::nn
