#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "samarl/plot.hpp"
#include "samarl/runner.hpp"

using namespace samarl;
using namespace samarl::eval;

namespace {

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0, pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("empty-human episode renders the robot path only") {
  ScenarioConfig cfg;
  cfg.n_robots = 1;
  cfg.n_humans = 0;
  cfg.circle_radius = 4.0;
  EpisodeLog log = run_episode(cfg, PolicyKind::OrcaBaseline, nullptr, 2);
  const std::string svg = render_episode_svg(log);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") == 1);
  CHECK(svg.find("id=\"collision\"") == std::string::npos);
}

TEST_CASE("13-agent episode renders 13 distinct polylines") {
  ScenarioConfig cfg;
  cfg.n_robots = 3;
  cfg.n_humans = 10;
  EpisodeLog log = run_episode(cfg, PolicyKind::OrcaBaseline, nullptr, 6);
  const std::string svg = render_episode_svg(log);
  CHECK(count_occurrences(svg, "<polyline") == 13);
}

TEST_CASE("collision episodes carry a collision marker") {
  ScenarioConfig cfg;
  cfg.n_robots = 2;
  cfg.n_humans = 4;
  cfg.circle_radius = 4.0;
  // Random policy collides quickly at this density on most seeds
  EpisodeLog log;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 50 && !found; ++seed) {
    log = run_episode(cfg, PolicyKind::Random, nullptr, seed);
    found = log.final_status == EpisodeStatus::Collision;
  }
  REQUIRE(found);
  const std::string svg = render_episode_svg(log);
  CHECK(svg.find("id=\"collision\"") != std::string::npos);
}

TEST_CASE("plot_episode reads a log file and writes SVG") {
  ScenarioConfig cfg;
  cfg.n_robots = 1;
  cfg.n_humans = 1;
  cfg.circle_radius = 4.0;
  EpisodeLog log = run_episode(cfg, PolicyKind::OrcaBaseline, nullptr, 4);
  const std::string log_path = "/tmp/samarl_test_plot.jsonl";
  const std::string svg_path = "/tmp/samarl_test_plot.svg";
  write_episode_log(log_path, log);
  plot_episode(log_path, svg_path);
  std::ifstream in(svg_path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("</svg>") != std::string::npos);
  std::remove(log_path.c_str());
  std::remove(svg_path.c_str());
}
