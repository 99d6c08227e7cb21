#include "samarl/orca.hpp"

#include <algorithm>
#include <cmath>

namespace samarl {

namespace {

constexpr double kTieBreakRot = 1e-3;  // rad, breaks exact head-on symmetry

struct Line {
  Vec2 point;
  Vec2 direction;  // feasible side is to the left
};

double det(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// Finds the optimum on line `i` subject to lines [0, i) and the speed disc.
bool linear_program1(const std::vector<Line>& lines, std::size_t i, double radius,
                     const Vec2& opt, bool direction_opt, Vec2& result) {
  const double dot = lines[i].point.dot(lines[i].direction);
  const double discriminant = dot * dot + radius * radius - lines[i].point.squared_norm();
  if (discriminant < 0.0) return false;  // disc misses the line entirely

  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dot - sqrt_disc;
  double t_right = -dot + sqrt_disc;

  for (std::size_t j = 0; j < i; ++j) {
    const double denominator = det(lines[i].direction, lines[j].direction);
    const double numerator = det(lines[j].direction, lines[i].point - lines[j].point);
    if (std::abs(denominator) <= 1e-10) {
      if (numerator < 0.0) return false;  // parallel and fully infeasible
      continue;
    }
    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) return false;
  }

  double t;
  if (direction_opt) {
    t = (opt.dot(lines[i].direction) > 0.0) ? t_right : t_left;
  } else {
    t = std::clamp(lines[i].direction.dot(opt - lines[i].point), t_left, t_right);
  }
  result = lines[i].point + t * lines[i].direction;
  return true;
}

// Returns the index of the first infeasible line, or lines.size() on success.
std::size_t linear_program2(const std::vector<Line>& lines, double radius, const Vec2& opt,
                            bool direction_opt, Vec2& result) {
  if (direction_opt) {
    result = opt * radius;
  } else if (opt.squared_norm() > radius * radius) {
    result = opt.normalized() * radius;
  } else {
    result = opt;
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) > 0.0) {
      const Vec2 saved = result;
      if (!linear_program1(lines, i, radius, opt, direction_opt, result)) {
        result = saved;
        return i;
      }
    }
  }
  return lines.size();
}

// Least-penetration fallback when the strict program is infeasible.
void linear_program3(const std::vector<Line>& lines, std::size_t begin_line, double radius,
                     Vec2& result) {
  double distance = 0.0;
  for (std::size_t i = begin_line; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) <= distance) continue;

    std::vector<Line> proj_lines;
    proj_lines.reserve(i);
    for (std::size_t j = 0; j < i; ++j) {
      Line line;
      const double determinant = det(lines[i].direction, lines[j].direction);
      if (std::abs(determinant) <= 1e-10) {
        if (lines[i].direction.dot(lines[j].direction) > 0.0) continue;
        line.point = 0.5 * (lines[i].point + lines[j].point);
      } else {
        line.point = lines[i].point +
                     (det(lines[j].direction, lines[i].point - lines[j].point) / determinant) *
                         lines[i].direction;
      }
      line.direction = (lines[j].direction - lines[i].direction).normalized();
      proj_lines.push_back(line);
    }

    const Vec2 saved = result;
    const Vec2 opt{-lines[i].direction.y, lines[i].direction.x};
    if (linear_program2(proj_lines, radius, opt, true, result) < proj_lines.size()) {
      result = saved;
    }
    distance = det(lines[i].direction, lines[i].point - result);
  }
}

Line orca_line(const PublicState& self, double self_radius, const PublicState& other,
               const OrcaParams& params, double dt) {
  const Vec2 rel_pos = other.p - self.p;
  const Vec2 rel_vel = self.v - other.v;
  const double dist_sq = rel_pos.squared_norm();
  const double combined_r = self_radius + other.rho + params.safety_margin;
  const double combined_r_sq = combined_r * combined_r;

  Line line;
  Vec2 u;

  if (dist_sq > combined_r_sq) {
    const double inv_tau = 1.0 / params.time_horizon;
    const Vec2 w = rel_vel - inv_tau * rel_pos;
    const double w_len_sq = w.squared_norm();
    const double dot1 = w.dot(rel_pos);
    if (dot1 < 0.0 && dot1 * dot1 > combined_r_sq * w_len_sq) {
      // project on the cut-off circle
      const double w_len = std::sqrt(w_len_sq);
      const Vec2 unit_w = w / w_len;
      line.direction = Vec2{unit_w.y, -unit_w.x};
      u = (combined_r * inv_tau - w_len) * unit_w;
    } else {
      // project on a leg of the velocity obstacle
      const double leg = std::sqrt(dist_sq - combined_r_sq);
      if (det(rel_pos, w) > 0.0) {
        line.direction = Vec2{rel_pos.x * leg - rel_pos.y * combined_r,
                              rel_pos.x * combined_r + rel_pos.y * leg} /
                         dist_sq;
      } else {
        line.direction = Vec2{rel_pos.x * leg + rel_pos.y * combined_r,
                              -rel_pos.x * combined_r + rel_pos.y * leg} /
                         dist_sq * -1.0;
      }
      u = (rel_vel.dot(line.direction)) * line.direction - rel_vel;
    }
  } else {
    // already overlapping: escape over the dt horizon
    const double inv_dt = 1.0 / dt;
    const Vec2 w = rel_vel - inv_dt * rel_pos;
    const double w_len = w.norm();
    const Vec2 unit_w = w_len > 1e-12 ? w / w_len : Vec2{1.0, 0.0};
    line.direction = Vec2{unit_w.y, -unit_w.x};
    u = (combined_r * inv_dt - w_len) * unit_w;
  }

  line.point = self.v + 0.5 * u;  // reciprocity
  return line;
}

std::vector<Line> build_lines(const PublicState& self, double self_radius,
                              const std::vector<PublicState>& neighbors,
                              const OrcaParams& params, double dt) {
  std::vector<const PublicState*> near;
  for (const auto& n : neighbors) {
    if ((n.p - self.p).norm() < params.neighbor_dist) near.push_back(&n);
  }
  std::sort(near.begin(), near.end(), [&](const PublicState* a, const PublicState* b) {
    return (a->p - self.p).squared_norm() < (b->p - self.p).squared_norm();
  });
  if (static_cast<int>(near.size()) > params.max_neighbors) near.resize(params.max_neighbors);

  std::vector<Line> lines;
  lines.reserve(near.size());
  for (const auto* n : near) lines.push_back(orca_line(self, self_radius, *n, params, dt));
  return lines;
}

Vec2 solve(const Vec2& pref, const std::vector<Line>& lines, double v_cap) {
  Vec2 result;
  std::size_t fail = linear_program2(lines, v_cap, pref, false, result);
  if (fail < lines.size()) linear_program3(lines, fail, v_cap, result);
  return result;
}

Vec2 goal_pref_velocity(const AgentState& self, double dt) {
  const Vec2 to_goal = self.prv.goal - self.pub.p;
  const double dist = to_goal.norm();
  if (dist <= self.pub.rho) return Vec2{0.0, 0.0};
  const double speed = std::min(self.prv.v_pref, dist / dt);
  return (to_goal / dist * speed).rotated(kTieBreakRot);
}

}  // namespace

std::vector<HalfPlane> orca_halfplanes(const PublicState& self, double self_margin_radius,
                                       const std::vector<PublicState>& neighbors,
                                       const OrcaParams& params, double dt) {
  const auto lines = build_lines(self, self_margin_radius, neighbors, params, dt);
  std::vector<HalfPlane> planes;
  planes.reserve(lines.size());
  for (const auto& l : lines) {
    planes.push_back(HalfPlane{l.point, Vec2{-l.direction.y, l.direction.x}});
  }
  return planes;
}

Vec2 solve_velocity(const Vec2& pref_velocity, const std::vector<HalfPlane>& halfplanes,
                    double v_cap) {
  std::vector<Line> lines;
  lines.reserve(halfplanes.size());
  for (const auto& h : halfplanes) {
    lines.push_back(Line{h.point, Vec2{h.normal.y, -h.normal.x}});
  }
  return solve(pref_velocity, lines, v_cap);
}

Vec2 human_policy(const AgentState& self, const std::vector<PublicState>& visible_humans,
                  const OrcaParams& params, double dt) {
  // At the goal the preferred velocity is zero, but the constraints still
  // apply: a parked human must yield its half of the reciprocal avoidance.
  const Vec2 pref = goal_pref_velocity(self, dt);
  const auto lines = build_lines(self.pub, self.pub.rho, visible_humans, params, dt);
  return solve(pref, lines, self.prv.v_pref);
}

Vec2 orca_policy(const AgentState& self, const std::vector<PublicState>& neighbors,
                 const OrcaParams& params, double dt, double v_cap) {
  const Vec2 to_goal = self.prv.goal - self.pub.p;
  if (to_goal.norm() <= self.pub.rho) return Vec2{0.0, 0.0};
  const Vec2 pref = goal_pref_velocity(self, dt);
  const auto lines = build_lines(self.pub, self.pub.rho, neighbors, params, dt);
  return solve(pref, lines, std::min(v_cap, std::max(self.prv.v_pref, 1e-6)));
}

}  // namespace samarl
