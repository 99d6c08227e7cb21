#pragma once

#include "samarl/episode_log.hpp"

namespace samarl::eval {

/// Renders an episode as an SVG: robot and human trajectories as polylines,
/// goal markers, and a collision marker when the episode ended in one.
std::string render_episode_svg(const EpisodeLog& log);

void plot_episode(const std::string& log_path, const std::string& out_path);

}  // namespace samarl::eval
