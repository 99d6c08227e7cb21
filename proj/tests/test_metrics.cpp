#include <doctest.h>

#include <sstream>

#include "samarl/metrics.hpp"
#include "samarl/runner.hpp"

using namespace samarl;
using namespace samarl::eval;

namespace {

EpisodeSummary summary_with(std::vector<bool> reached, bool collision = false) {
  EpisodeSummary s;
  s.status = collision ? EpisodeStatus::Collision : EpisodeStatus::AllSuccess;
  s.collision = collision;
  for (bool r : reached) {
    RobotSummary rs;
    rs.reached = r;
    rs.navigation_time = 10.0;
    rs.straight_line_dist = 8.0;
    rs.v_pref = 1.0;
    s.robots.push_back(rs);
  }
  return s;
}

}  // namespace

TEST_CASE("success rate is the joint criterion") {
  std::vector<EpisodeSummary> all{summary_with({true, true}), summary_with({true, true})};
  CHECK(success_rate(all) == 1.0);

  std::vector<EpisodeSummary> partial{summary_with({true, false}),
                                      summary_with({true, false})};
  CHECK(success_rate(partial) == 0.0);

  std::vector<EpisodeSummary> mixed{summary_with({true, true}),
                                    summary_with({true, false}),
                                    summary_with({true, true}, /*collision=*/true)};
  CHECK(success_rate(mixed) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(success_rate({}), MetricsError);
}

TEST_CASE("robot social score proxy") {
  EpisodeSummary s = summary_with({true});
  SUBCASE("failed robot scores zero") {
    s.robots[0].reached = false;
    CHECK(robot_social_score(s, 0) == 0.0);
  }
  SUBCASE("optimal run saturates at 100") {
    s.robots[0].navigation_time = 8.0;  // straight line at v_pref exactly
    s.robots[0].discomfort_fraction = 0.0;
    CHECK(robot_social_score(s, 0) == doctest::Approx(100.0));
  }
  SUBCASE("worked example: te 0.8, comfort 0.5 -> 82.5") {
    s.robots[0].navigation_time = 10.0;  // 8 / 1.0 / 10 = 0.8
    s.robots[0].discomfort_fraction = 0.5;
    CHECK(robot_social_score(s, 0) == doctest::Approx(82.5));
  }
  SUBCASE("time efficiency is clipped to [0, 1]") {
    s.robots[0].navigation_time = 1.0;  // ratio 8, clips to 1
    s.robots[0].discomfort_fraction = 0.0;
    CHECK(robot_social_score(s, 0) == doctest::Approx(100.0));
  }
  CHECK_THROWS_AS(robot_social_score(s, 5), MetricsError);
}

TEST_CASE("MR-SAN aggregation over the weight simplex") {
  EpisodeSummary a = summary_with({true, true});
  a.robots[0].navigation_time = 10.0;
  a.robots[0].discomfort_fraction = 0.5;   // score 82.5
  a.robots[1].navigation_time = 8.0;       // score 100
  a.robots[1].discomfort_fraction = 0.0;
  std::vector<EpisodeSummary> eps{a};

  CHECK(mrsan_social_score(eps, {1.0, 0.0}) == doctest::Approx(82.5));
  CHECK(mrsan_social_score(eps, {0.0, 1.0}) == doctest::Approx(100.0));
  CHECK(mrsan_social_score(eps, {0.5, 0.5}) == doctest::Approx(91.25));
  // bounded by the component extremes
  const double mid = mrsan_social_score(eps, {0.3, 0.7});
  CHECK(mid >= 82.5);
  CHECK(mid <= 100.0);

  CHECK_THROWS_AS(mrsan_social_score(eps, {0.5, 0.6}), MetricsError);
  CHECK_THROWS_AS(mrsan_social_score(eps, {-0.5, 1.5}), MetricsError);
  CHECK_THROWS_AS(mrsan_social_score(eps, {1.0}), MetricsError);
}

TEST_CASE("summaries are recomputed bit-exact from serialized logs") {
  ScenarioConfig cfg;
  cfg.n_robots = 2;
  cfg.n_humans = 3;
  cfg.circle_radius = 4.0;
  EpisodeLog log = run_episode(cfg, PolicyKind::OrcaBaseline, nullptr, 12);

  std::ostringstream out;
  write_episode_log(out, log);
  std::istringstream in(out.str());
  EpisodeLog back = read_episode_log(in);

  const EpisodeSummary online = summarize(log);
  const EpisodeSummary replayed = summarize(back);
  REQUIRE(online.robots.size() == replayed.robots.size());
  CHECK(online.status == replayed.status);
  for (std::size_t i = 0; i < online.robots.size(); ++i) {
    CHECK(online.robots[i].reached == replayed.robots[i].reached);
    CHECK(online.robots[i].navigation_time == replayed.robots[i].navigation_time);
    CHECK(online.robots[i].path_length == replayed.robots[i].path_length);
    CHECK(online.robots[i].min_human_surface_dist ==
          replayed.robots[i].min_human_surface_dist);
    CHECK(online.robots[i].discomfort_fraction == replayed.robots[i].discomfort_fraction);
  }
}

TEST_CASE("ORCA baseline solves the empty-human world") {
  ScenarioConfig cfg;
  cfg.n_robots = 2;
  cfg.n_humans = 0;
  cfg.circle_radius = 4.0;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(s);
  EvalReport report = run_policy_eval(PolicyKind::OrcaBaseline, cfg, seeds, nullptr,
                                      std::nullopt);
  CHECK(report.success_rate == doctest::Approx(1.0));
}

TEST_CASE("evaluation reports are byte-identical across reruns") {
  ScenarioConfig cfg;
  cfg.n_robots = 1;
  cfg.n_humans = 2;
  cfg.circle_radius = 4.0;
  std::vector<std::uint64_t> seeds{3, 4, 5};
  EvalReport a = run_policy_eval(PolicyKind::Random, cfg, seeds, nullptr, std::nullopt);
  EvalReport b = run_policy_eval(PolicyKind::Random, cfg, seeds, nullptr, std::nullopt);
  CHECK(a.csv == b.csv);
  CHECK(a.table == b.table);
}
