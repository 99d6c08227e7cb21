#include "samarl/marl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace samarl::marl {

GaeResult gae(const std::vector<double>& rewards, const std::vector<double>& values,
              double bootstrap, double gamma, double lambda,
              const std::vector<bool>& dones) {
  const std::size_t n = rewards.size();
  if (n == 0) throw std::invalid_argument("gae: empty input");
  if (values.size() != n || dones.size() != n)
    throw std::invalid_argument("gae: length mismatch");

  GaeResult out;
  out.advantages.resize(n);
  out.returns.resize(n);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double v_next = (i + 1 < n) ? values[i + 1] : bootstrap;
    const double delta = rewards[i] + gamma * v_next * not_done - values[i];
    running = delta + gamma * lambda * not_done * running;
    out.advantages[i] = running;
    out.returns[i] = running + values[i];
  }
  return out;
}

double actor_loss(const std::vector<double>& new_logp, const std::vector<double>& old_logp,
                  const std::vector<double>& advantages, double entropy, double clip,
                  double kappa) {
  const std::size_t n = new_logp.size();
  if (n == 0 || old_logp.size() != n || advantages.size() != n)
    throw std::invalid_argument("actor_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = std::exp(new_logp[i] - old_logp[i]);
    if (!std::isfinite(ratio)) throw std::runtime_error("actor_loss: non-finite ratio");
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    sum += std::min(ratio * advantages[i], clipped * advantages[i]);
  }
  return -(sum / static_cast<double>(n)) - kappa * entropy;
}

double critic_loss(const std::vector<double>& values, const std::vector<double>& old_values,
                   const std::vector<double>& returns, double value_clip) {
  const std::size_t n = values.size();
  if (n == 0 || old_values.size() != n || returns.size() != n)
    throw std::invalid_argument("critic_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double unclipped = values[i] - returns[i];
    const double clipped =
        std::clamp(values[i], old_values[i] - value_clip, old_values[i] + value_clip) -
        returns[i];
    sum += std::max(unclipped * unclipped, clipped * clipped);
  }
  return sum / static_cast<double>(n);
}

nn::Var actor_loss_graph(nn::Tape& t, nn::Var new_logp, const nn::Mat& old_logp,
                         const nn::Mat& advantages, nn::Var entropy, double clip,
                         double kappa) {
  nn::Var ratio = t.exp(t.sub(new_logp, t.constant(old_logp)));
  nn::Var adv = t.constant(advantages);
  nn::Var lo = t.constant(nn::Mat::Constant(old_logp.rows(), 1, 1.0 - clip));
  nn::Var hi = t.constant(nn::Mat::Constant(old_logp.rows(), 1, 1.0 + clip));
  nn::Var clipped = t.cwise_min(t.cwise_max(ratio, lo), hi);
  nn::Var surrogate = t.cwise_min(t.cwise_mul(ratio, adv), t.cwise_mul(clipped, adv));
  nn::Var loss = t.neg(t.mean_all(surrogate));
  return t.sub(loss, t.scale(entropy, kappa));
}

nn::Var critic_loss_graph(nn::Tape& t, nn::Var values, const nn::Mat& old_values,
                          const nn::Mat& returns, double value_clip) {
  nn::Var r = t.constant(returns);
  nn::Var lo = t.constant(nn::Mat(old_values.array() - value_clip));
  nn::Var hi = t.constant(nn::Mat(old_values.array() + value_clip));
  nn::Var clipped = t.cwise_min(t.cwise_max(values, lo), hi);
  nn::Var err_u = t.square(t.sub(values, r));
  nn::Var err_c = t.square(t.sub(clipped, r));
  return t.mean_all(t.cwise_max(err_u, err_c));
}

}  // namespace samarl::marl
