#pragma once

#include <vector>

namespace xrmarl::sim {

// XR quality index from the (PDR %, packet delay budget ms) mapping.
// First matching case wins:
//   5: pdr >= 99 and delay <= 7
//   4: pdr >= 99 and delay <= 10
//   3: pdr >= 95 and delay <= 13
//   2: pdr >= 95 and delay <= 20
//   1: otherwise
int xqi_level(double pdr_percent, double delay_ms);

// Quality levels 5..1 mapped to rewards {1, 0.75, 0.5, 0.25, 0}.
double reward_xqi(double pdr_percent, double delay_ms);

// Team reward: minimum over the per-agent rewards.
double team_reward(const std::vector<double>& agent_rewards);

}  // namespace xrmarl::sim
