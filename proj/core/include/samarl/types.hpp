#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace samarl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  Vec2 normalized(double eps = 1e-12) const {
    double n = norm();
    return n > eps ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
  Vec2 rotated(double angle) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

enum class AgentKind : std::uint8_t { Robot, Human };

/// Observable part of an agent state: position, velocity, body radius.
struct PublicState {
  Vec2 p;
  Vec2 v;
  double rho = 0.3;
};

/// Hidden part: goal, preferred speed, heading.
struct PrivateState {
  Vec2 goal;
  double v_pref = 1.0;
  double theta = 0.0;
};

struct AgentState {
  AgentKind kind = AgentKind::Human;
  PublicState pub;
  PrivateState prv;
  int id = -1;
};

struct KinematicLimits {
  double a_max = 5.0;
  double dtheta_max = M_PI / 12.0;
  double r_min = 1.0;
  double v_max = 2.0;
};

struct ScenarioConfig {
  int n_robots = 3;
  int n_humans = 10;
  double circle_radius = 5.0;
  double fov_deg = 360.0;
  double dt = 0.25;
  int t_k_max = 20;       // decision epochs per episode
  int macro_period = 5;   // LA steps per MA
  std::uint64_t seed = 0;
  KinematicLimits limits;
  double human_radius = 0.3;
  double robot_radius = 0.3;
  double v_pref_min = 0.5;
  double v_pref_max = 1.5;
  double gamma = 0.99;

  int max_steps() const { return t_k_max * macro_period; }
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a ScenarioConfig from a JSON document. Unknown keys are rejected.
ScenarioConfig scenario_config_from_json(const std::string& json_text);
std::string scenario_config_to_json(const ScenarioConfig& cfg);

}  // namespace samarl
