#pragma once

#include <random>
#include <vector>

#include "samarl/types.hpp"

namespace samarl {

using Rng = std::mt19937_64;

/// Places robots and humans on the configured circle with antipodal goals.
/// Throws ScenarioError when rejection sampling cannot find a collision-free
/// placement within a bounded number of retries.
std::vector<AgentState> generate_scenario(const ScenarioConfig& config, Rng& rng);

}  // namespace samarl
