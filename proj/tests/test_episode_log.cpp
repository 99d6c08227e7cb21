#include <doctest.h>

#include <sstream>

#include "samarl/episode_log.hpp"

using namespace samarl;

namespace {

EpisodeLog sample_log() {
  ScenarioConfig cfg;
  cfg.n_robots = 1;
  cfg.n_humans = 1;
  auto [world, obs] = reset(cfg, 4);
  EpisodeLog log;
  log.config = world.config;
  log.initial_agents = world.agents;
  for (int t = 0; t < 3; ++t) {
    std::vector<LocalAction> acts{{0.5, 0.0, world.agents[0].prv.theta}};
    StepResult r = step(world, acts);
    LoggedStep s;
    s.t = world.t;
    s.agents = world.agents;
    s.actions = acts;
    s.rewards = r.rewards;
    s.status = world.status;
    log.steps.push_back(s);
    if (world.done()) break;
  }
  log.final_status = world.status;
  return log;
}

}  // namespace

TEST_CASE("episode log round trips through JSONL") {
  const EpisodeLog log = sample_log();
  std::ostringstream out;
  write_episode_log(out, log);

  std::istringstream in(out.str());
  const EpisodeLog back = read_episode_log(in);
  CHECK(back.config.n_robots == log.config.n_robots);
  CHECK(back.final_status == log.final_status);
  REQUIRE(back.steps.size() == log.steps.size());
  REQUIRE(back.initial_agents.size() == log.initial_agents.size());
  for (std::size_t i = 0; i < log.initial_agents.size(); ++i) {
    CHECK(back.initial_agents[i].pub.p.x == log.initial_agents[i].pub.p.x);
    CHECK(back.initial_agents[i].prv.goal.y == log.initial_agents[i].prv.goal.y);
    CHECK(back.initial_agents[i].kind == log.initial_agents[i].kind);
  }
  for (std::size_t s = 0; s < log.steps.size(); ++s) {
    CHECK(back.steps[s].t == log.steps[s].t);
    CHECK(back.steps[s].rewards == log.steps[s].rewards);
    CHECK(back.steps[s].agents[0].pub.v.x == log.steps[s].agents[0].pub.v.x);
  }

  // serialization is deterministic
  std::ostringstream again;
  write_episode_log(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("malformed logs report the offending line") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_episode_log(empty), LogParseError);

  std::istringstream junk("not json\n");
  try {
    read_episode_log(junk);
    FAIL("expected LogParseError");
  } catch (const LogParseError& e) {
    CHECK(e.line_number == 1);
  }

  const EpisodeLog log = sample_log();
  std::ostringstream out;
  write_episode_log(out, log);
  std::string text = out.str();
  text += "{\"broken\": true}\n";
  std::istringstream in(text);
  try {
    read_episode_log(in);
    FAIL("expected LogParseError");
  } catch (const LogParseError& e) {
    CHECK(e.line_number == static_cast<int>(2 + log.steps.size()));
  }
}
