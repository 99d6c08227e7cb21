#include <doctest.h>

#include "samarl/env.hpp"

using namespace samarl;

namespace {

World make_world(int nr, const std::vector<Vec2>& robot_pos,
                 const std::vector<Vec2>& robot_goal,
                 const std::vector<Vec2>& human_pos) {
  World w;
  w.config.n_robots = nr;
  w.config.n_humans = static_cast<int>(human_pos.size());
  int id = 0;
  for (int i = 0; i < nr; ++i) {
    AgentState a;
    a.kind = AgentKind::Robot;
    a.id = id++;
    a.pub.p = robot_pos[i];
    a.prv.goal = robot_goal[i];
    w.agents.push_back(a);
  }
  for (const auto& p : human_pos) {
    AgentState h;
    h.kind = AgentKind::Human;
    h.id = id++;
    h.pub.p = p;
    w.agents.push_back(h);
  }
  w.reached.assign(nr, false);
  w.collided.assign(nr, false);
  return w;
}

// Human placed so the robot's min surface distance equals `dis` (radii 0.3 + 0.3).
World with_human_at_distance(double dis) {
  World w = make_world(2, {{0.0, 0.0}, {9.0, 9.0}}, {{5.0, 0.0}, {9.0, 9.5}},
                       {{dis + 0.6, 0.0}});
  return w;
}

}  // namespace

TEST_CASE("reward fixture: exact Eq.-branch values") {
  const World before = make_world(2, {{0.0, 0.0}, {8.0, 8.0}}, {{5.0, 0.0}, {9.0, 9.0}},
                                  {{0.0, 6.0}});

  SUBCASE("all robots reached -> 5 for everyone") {
    World after = before;
    after.reached = {true, true};
    CHECK(reward(before, after, 0) == 5.0);
    CHECK(reward(before, after, 1) == 5.0);
  }
  SUBCASE("own goal reached, others still running -> 10") {
    World after = before;
    after.reached = {true, false};
    CHECK(reward(before, after, 0) == 10.0);
  }
  SUBCASE("own success takes precedence over a simultaneous collision") {
    World after = before;
    after.reached = {true, false};
    after.collided = {true, false};
    CHECK(reward(before, after, 0) == 10.0);
  }
  SUBCASE("collision -> -20") {
    World after = before;
    after.collided = {true, false};
    CHECK(reward(before, after, 0) == -20.0);
  }
  SUBCASE("discomfort at dis = 0.4 -> -2.5") {
    World after = with_human_at_distance(0.4);
    CHECK(reward(after, after, 0) == doctest::Approx(-2.5).epsilon(1e-12));
  }
  SUBCASE("discomfort at dis = 0.25 -> -4") {
    World after = with_human_at_distance(0.25);
    CHECK(reward(after, after, 0) == doctest::Approx(-4.0).epsilon(1e-12));
  }
  SUBCASE("discomfort floor at dis = 0.1 -> -5") {
    World after = with_human_at_distance(0.1);
    CHECK(reward(after, after, 0) == -5.0);
  }
  SUBCASE("discomfort boundary dis = 0.45 -> -1/0.45") {
    World after = with_human_at_distance(0.45);
    CHECK(reward(after, after, 0) == doctest::Approx(-1.0 / 0.45).epsilon(1e-12));
  }
  SUBCASE("just outside the discomfort band -> progress branch") {
    World after = with_human_at_distance(0.46);
    CHECK(reward(after, after, 0) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("progress toward goal: 0.3 m closer -> +0.6") {
    World after = before;
    after.agents[0].pub.p = {0.3, 0.0};
    CHECK(reward(before, after, 0) == doctest::Approx(0.6).epsilon(1e-12));
  }
  SUBCASE("moving away 0.2 m -> -0.4") {
    World after = before;
    after.agents[0].pub.p = {-0.2, 0.0};
    CHECK(reward(before, after, 0) == doctest::Approx(-0.4).epsilon(1e-12));
  }
  SUBCASE("overlapping human (dis <= 0) floors at -5") {
    World after = with_human_at_distance(-0.1);
    CHECK(reward(after, after, 0) == -5.0);
  }
}

TEST_CASE("macro reward is the discounted LA sum") {
  CHECK(macro_reward({1.0, 1.0, 1.0}, 0.5) == doctest::Approx(1.75));
  CHECK(macro_reward({2.0}, 0.99) == doctest::Approx(2.0));
  CHECK_THROWS_AS(macro_reward({}, 0.99), EnvUsageError);
}

TEST_CASE("FOV sector is closed at the boundary") {
  World w = make_world(1, {{0.0, 0.0}}, {{5.0, 0.0}}, {{0.0, 2.0}, {2.0, 0.0}, {-2.0, 0.1}});
  w.agents[0].prv.theta = 0.0;
  w.config.fov_deg = 180.0;
  const Observation obs = observe(w, 0);
  // bearing +90 deg is exactly on the closed boundary; behind is out
  REQUIRE(obs.visible.size() == 2);
  CHECK(obs.visible_ids[0] == 1);
  CHECK(obs.visible_ids[1] == 2);
  CHECK_THROWS_AS(observe(w, 5), EnvUsageError);
}

TEST_CASE("full environment episode bookkeeping") {
  ScenarioConfig cfg;
  cfg.n_robots = 1;
  cfg.n_humans = 0;  // empty world: a braking robot times out deterministically
  cfg.circle_radius = 4.0;
  auto [world, obs] = reset(cfg, 3);
  REQUIRE(world.agents.size() == 1);
  CHECK(world.t == 0);
  CHECK(obs.size() == 1);

  std::vector<LocalAction> brake{{0.0, 0.0, world.agents[0].prv.theta}};
  StepResult r = step(world, brake);
  CHECK(world.t == 1);
  CHECK(world.t_k == 0);
  CHECK(r.rewards.size() == 1);
  for (int t = 1; t < cfg.max_steps() && !world.done(); ++t) step(world, brake);
  CHECK(world.done());
  CHECK(world.status == EpisodeStatus::Timeout);  // a braking robot never arrives
  CHECK_THROWS_AS(step(world, brake), EnvUsageError);
  CHECK_THROWS_AS(step(world, {}), EnvUsageError);
}

TEST_CASE("reset is deterministic in the seed") {
  ScenarioConfig cfg;
  cfg.n_robots = 2;
  cfg.n_humans = 3;
  auto [wa, oa] = reset(cfg, 9);
  auto [wb, ob] = reset(cfg, 9);
  for (std::size_t i = 0; i < wa.agents.size(); ++i) {
    CHECK(wa.agents[i].pub.p.x == wb.agents[i].pub.p.x);
    CHECK(wa.agents[i].prv.goal.y == wb.agents[i].prv.goal.y);
  }
}
