#include "samarl/kinematics.hpp"

#include <algorithm>

namespace samarl {

LocalAction clamp_action(const LocalAction& raw, double prev_theta, double speed_next,
                         double dt, const KinematicLimits& limits) {
  LocalAction out = raw;

  double a_norm = std::hypot(out.ax, out.ay);
  if (a_norm > limits.a_max) {
    double s = limits.a_max / a_norm;
    out.ax *= s;
    out.ay *= s;
  }

  double dtheta = wrap_angle(out.theta - prev_theta);
  double bound = limits.dtheta_max;
  if (speed_next >= kTurnSpeedEps) {
    // arc radius = speed*dt/|dtheta| >= r_min
    bound = std::min(bound, dt * speed_next / limits.r_min);
  }
  dtheta = std::clamp(dtheta, -bound, bound);
  out.theta = wrap_angle(prev_theta + dtheta);
  return out;
}

BodyState integrate(const BodyState& state, const LocalAction& action, double dt,
                    const KinematicLimits& limits) {
  const double speed = state.v.norm();
  const Vec2 v_rot{speed * std::cos(action.theta), speed * std::sin(action.theta)};
  const Vec2 a{action.ax, action.ay};

  BodyState out;
  out.p = state.p + v_rot * dt + a * (0.5 * dt * dt);
  out.v = v_rot + a * dt;
  double s = out.v.norm();
  if (s > limits.v_max) out.v = out.v * (limits.v_max / s);
  out.theta = wrap_angle(action.theta);
  return out;
}

PublicState integrate_human(const PublicState& state, const Vec2& target_velocity,
                            double v_pref, double dt) {
  PublicState out = state;
  Vec2 v = target_velocity;
  double s = v.norm();
  if (s > v_pref) v = v * (v_pref / s);
  out.v = v;
  out.p = state.p + v * dt;
  return out;
}

}  // namespace samarl
