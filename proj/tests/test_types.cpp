#include <doctest.h>

#include "samarl/types.hpp"

using namespace samarl;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(2 * M_PI) == doctest::Approx(0.0));
  CHECK(wrap_angle(-0.1) == doctest::Approx(-0.1));
  // idempotence over a sweep
  for (int i = -100; i <= 100; ++i) {
    const double th = 0.137 * i;
    const double w = wrap_angle(th);
    CHECK(w > -M_PI - 1e-12);
    CHECK(w <= M_PI + 1e-12);
    CHECK(wrap_angle(w) == doctest::Approx(w).epsilon(1e-12));
    CHECK(std::sin(w) == doctest::Approx(std::sin(th)).epsilon(1e-9));
    CHECK(std::cos(w) == doctest::Approx(std::cos(th)).epsilon(1e-9));
  }
}

TEST_CASE("Vec2 algebra") {
  Vec2 a{3.0, 4.0}, b{-1.0, 2.0};
  CHECK(a.norm() == doctest::Approx(5.0));
  CHECK(a.dot(b) == doctest::Approx(5.0));
  CHECK(a.cross(b) == doctest::Approx(10.0));
  CHECK((a + b).x == doctest::Approx(2.0));
  CHECK(a.normalized().norm() == doctest::Approx(1.0));
  CHECK(Vec2{0.0, 0.0}.normalized().norm() == doctest::Approx(0.0));
  const Vec2 r = Vec2{1.0, 0.0}.rotated(M_PI / 2);
  CHECK(r.x == doctest::Approx(0.0));
  CHECK(r.y == doctest::Approx(1.0));
}

TEST_CASE("scenario config JSON round trip") {
  ScenarioConfig cfg;
  cfg.n_robots = 2;
  cfg.n_humans = 4;
  cfg.circle_radius = 6.5;
  cfg.fov_deg = 180.0;
  cfg.v_pref_min = 0.7;
  cfg.v_pref_max = 1.2;
  const std::string text = scenario_config_to_json(cfg);
  const ScenarioConfig back = scenario_config_from_json(text);
  CHECK(back.n_robots == 2);
  CHECK(back.n_humans == 4);
  CHECK(back.circle_radius == doctest::Approx(6.5));
  CHECK(back.fov_deg == doctest::Approx(180.0));
  CHECK(back.v_pref_min == doctest::Approx(0.7));
  CHECK(back.v_pref_max == doctest::Approx(1.2));
  CHECK(scenario_config_to_json(back) == text);
}

TEST_CASE("unknown config keys are rejected") {
  CHECK_THROWS_AS(scenario_config_from_json(R"({"n_robots": 2, "bogus": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(scenario_config_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(scenario_config_from_json(R"({"n_robots": "two"})"), ConfigError);
}

TEST_CASE("config validation") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_robots = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.dt = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.v_pref_min = 2.0;
  cfg.v_pref_max = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
