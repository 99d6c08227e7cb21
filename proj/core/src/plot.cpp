#include "samarl/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace samarl::eval {

namespace {

constexpr double kCanvas = 600.0;
constexpr double kPad = 40.0;

const char* kRobotColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

}  // namespace

std::string render_episode_svg(const EpisodeLog& log) {
  const int nr = log.config.n_robots;
  const int na = static_cast<int>(log.initial_agents.size());

  double lo = -log.config.circle_radius, hi = log.config.circle_radius;
  auto grow = [&](const Vec2& p) {
    lo = std::min({lo, p.x, p.y});
    hi = std::max({hi, p.x, p.y});
  };
  for (const auto& a : log.initial_agents) {
    grow(a.pub.p);
    grow(a.prv.goal);
  }
  for (const auto& s : log.steps)
    for (const auto& a : s.agents) grow(a.pub.p);
  const double span = std::max(hi - lo, 1e-6);
  auto sx = [&](double x) { return kPad + (x - lo) / span * (kCanvas - 2 * kPad); };
  auto sy = [&](double y) { return kCanvas - kPad - (y - lo) / span * (kCanvas - 2 * kPad); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int i = 0; i < na; ++i) {
    const bool robot = i < nr;
    const std::string color =
        robot ? kRobotColors[i % 5] : "#999999";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << (robot ? 2 : 1) << "\" points=\"";
    out << num(sx(log.initial_agents[i].pub.p.x)) << ','
        << num(sy(log.initial_agents[i].pub.p.y));
    for (const auto& s : log.steps)
      out << ' ' << num(sx(s.agents[i].pub.p.x)) << ',' << num(sy(s.agents[i].pub.p.y));
    out << "\"/>\n";
    out << "<circle cx=\"" << num(sx(log.initial_agents[i].pub.p.x)) << "\" cy=\""
        << num(sy(log.initial_agents[i].pub.p.y)) << "\" r=\"4\" fill=\"" << color
        << "\"/>\n";
    if (robot) {
      const Vec2& g = log.initial_agents[i].prv.goal;
      out << "<path d=\"M " << num(sx(g.x) - 5) << ' ' << num(sy(g.y) + 5) << " L "
          << num(sx(g.x)) << ' ' << num(sy(g.y) - 5) << " L " << num(sx(g.x) + 5) << ' '
          << num(sy(g.y) + 5) << " Z\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    }
  }

  if (log.final_status == EpisodeStatus::Collision && !log.steps.empty()) {
    // Mark the colliding robot's final position.
    const auto& last = log.steps.back();
    int worst = 0;
    double best = 1e18;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < na; ++j) {
        if (j == i) continue;
        const double d = surface_distance(last.agents[i].pub, last.agents[j].pub);
        if (d < best) {
          best = d;
          worst = i;
        }
      }
    const double cx = sx(last.agents[worst].pub.p.x);
    const double cy = sy(last.agents[worst].pub.p.y);
    out << "<g id=\"collision\" stroke=\"black\" stroke-width=\"2\">"
        << "<line x1=\"" << num(cx - 6) << "\" y1=\"" << num(cy - 6) << "\" x2=\""
        << num(cx + 6) << "\" y2=\"" << num(cy + 6) << "\"/>"
        << "<line x1=\"" << num(cx - 6) << "\" y1=\"" << num(cy + 6) << "\" x2=\""
        << num(cx + 6) << "\" y2=\"" << num(cy - 6) << "\"/></g>\n";
  }

  out << "</svg>\n";
  return out.str();
}

void plot_episode(const std::string& log_path, const std::string& out_path) {
  EpisodeLog log = read_episode_log_file(log_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open SVG output: " + out_path);
  out << render_episode_svg(log);
}

}  // namespace samarl::eval
