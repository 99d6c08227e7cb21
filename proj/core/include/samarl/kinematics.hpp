#pragma once

#include "samarl/types.hpp"

namespace samarl {

/// Per-step robot command: acceleration vector plus commanded heading.
struct LocalAction {
  double ax = 0.0;
  double ay = 0.0;
  double theta = 0.0;
};

/// Position, velocity and heading of one robot between integration steps.
struct BodyState {
  Vec2 p;
  Vec2 v;
  double theta = 0.0;
};

// Speed below which the turning-radius constraint is waived (stationary
// robots may point anywhere).
inline constexpr double kTurnSpeedEps = 1e-6;

/// Enforces acceleration magnitude, per-step rotation and minimum turning
/// radius limits. Total: every raw action maps to a feasible one.
LocalAction clamp_action(const LocalAction& raw, double prev_theta, double speed_next,
                         double dt, const KinematicLimits& limits);

/// Advances one robot by dt: in-place rotation of the velocity onto the
/// commanded heading, then constant-acceleration translation. Speed is capped
/// at limits.v_max by radial rescale.
BodyState integrate(const BodyState& state, const LocalAction& action, double dt,
                    const KinematicLimits& limits);

/// First-order holonomic human motion: velocity snaps to the target clipped
/// to v_pref.
PublicState integrate_human(const PublicState& state, const Vec2& target_velocity,
                            double v_pref, double dt);

}  // namespace samarl
