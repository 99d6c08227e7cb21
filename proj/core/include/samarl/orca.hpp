#pragma once

#include <vector>

#include "samarl/types.hpp"

namespace samarl {

struct OrcaParams {
  double time_horizon = 5.0;
  double neighbor_dist = 10.0;
  int max_neighbors = 10;
  double safety_margin = 0.01;
};

/// Half-plane of permitted velocities: {v : (v - point) . normal >= 0}.
struct HalfPlane {
  Vec2 point;
  Vec2 normal;
};

/// Velocity-obstacle half-plane constraints for one agent against its
/// neighbors, reciprocity factor 1/2 applied. Overlapping pairs produce a
/// dt-horizon escape plane.
std::vector<HalfPlane> orca_halfplanes(const PublicState& self, double self_margin_radius,
                                       const std::vector<PublicState>& neighbors,
                                       const OrcaParams& params, double dt);

/// Feasible velocity closest to pref_velocity inside the speed disc, subject
/// to the half-planes; falls back to the least-penetration program when the
/// constraint set is empty.
Vec2 solve_velocity(const Vec2& pref_velocity, const std::vector<HalfPlane>& halfplanes,
                    double v_cap);

/// ORCA policy for a human: prefers v_pref toward its own goal, avoids the
/// given neighbors (humans cannot see robots, so callers pass humans only).
/// Returns zero once the agent is within rho of its goal.
Vec2 human_policy(const AgentState& self, const std::vector<PublicState>& visible_humans,
                  const OrcaParams& params, double dt);

/// ORCA policy for the robot baseline: same construction, arbitrary neighbor
/// set, speed capped at v_cap.
Vec2 orca_policy(const AgentState& self, const std::vector<PublicState>& neighbors,
                 const OrcaParams& params, double dt, double v_cap);

}  // namespace samarl
