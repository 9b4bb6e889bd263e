#include "xrmarl/sim/xqi.hpp"

#include <algorithm>
#include <stdexcept>

namespace xrmarl::sim {

int xqi_level(double pdr_percent, double delay_ms) {
  if (pdr_percent < 0.0 || pdr_percent > 100.0) {
    throw std::invalid_argument("xqi_level: pdr must be in [0, 100]");
  }
  if (delay_ms < 0.0) {
    throw std::invalid_argument("xqi_level: delay must be >= 0");
  }
  if (pdr_percent >= 99.0 && delay_ms <= 7.0) return 5;
  if (pdr_percent >= 99.0 && delay_ms <= 10.0) return 4;
  if (pdr_percent >= 95.0 && delay_ms <= 13.0) return 3;
  if (pdr_percent >= 95.0 && delay_ms <= 20.0) return 2;
  return 1;
}

double reward_xqi(double pdr_percent, double delay_ms) {
  switch (xqi_level(pdr_percent, delay_ms)) {
    case 5: return 1.0;
    case 4: return 0.75;
    case 3: return 0.5;
    case 2: return 0.25;
    default: return 0.0;
  }
}

double team_reward(const std::vector<double>& agent_rewards) {
  if (agent_rewards.empty()) {
    throw std::invalid_argument("team_reward: empty reward vector");
  }
  return *std::min_element(agent_rewards.begin(), agent_rewards.end());
}

}  // namespace xrmarl::sim
