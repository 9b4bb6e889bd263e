#include <algorithm>
#include <stdexcept>

#include "xrmarl/rl/action_grid.hpp"
#include "xrmarl/rl/hyperparams.hpp"
#include "xrmarl/rl/masking.hpp"

namespace xrmarl::rl {

double epsilon_schedule(long step, const Hyperparams& hp) {
  if (step < 0) throw std::invalid_argument("epsilon_schedule: negative step");
  if (hp.eps_decay_steps <= 0) return hp.eps_min;
  const double frac =
      static_cast<double>(step) / static_cast<double>(hp.eps_decay_steps);
  return std::max(hp.eps_min, hp.eps_start - (hp.eps_start - hp.eps_min) * frac);
}

CodecActionGrid::CodecActionGrid(double min_rate_mbps, double max_rate_mbps,
                                 int levels)
    : min_(min_rate_mbps), max_(max_rate_mbps), levels_(levels) {
  if (levels < 2) {
    throw std::invalid_argument("action grid: need at least two levels");
  }
  if (min_ > max_) {
    throw std::invalid_argument("action grid: min rate above max rate");
  }
}

double CodecActionGrid::rate(int level) const {
  if (level < 0 || level >= levels_) {
    throw std::invalid_argument("action grid: level out of range");
  }
  if (level == levels_ - 1) return max_;  // exact endpoint
  return min_ + level * (max_ - min_) / (levels_ - 1);
}

std::vector<double> CodecActionGrid::grid() const {
  std::vector<double> g(static_cast<std::size_t>(levels_));
  for (int k = 0; k < levels_; ++k) g[static_cast<std::size_t>(k)] = rate(k);
  return g;
}

int buffer_range_index(double occupancy_ratio) {
  if (occupancy_ratio < 0.96) return 0;
  if (occupancy_ratio < 0.97) return 1;
  if (occupancy_ratio < 0.98) return 2;
  if (occupancy_ratio < 0.99) return 3;
  return 4;
}

DisabledActionTable::DisabledActionTable(int num_agents, int num_ranges,
                                         int num_actions)
    : num_agents_(num_agents),
      num_ranges_(num_ranges),
      num_actions_(num_actions),
      disabled_(static_cast<std::size_t>(num_agents * num_ranges)) {
  if (num_agents < 1 || num_ranges < 1 || num_actions < 2) {
    throw std::invalid_argument("disabled-action table: degenerate shape");
  }
}

const std::set<int>& DisabledActionTable::cell(int agent, int range) const {
  if (agent < 0 || agent >= num_agents_ || range < 0 || range >= num_ranges_) {
    throw std::invalid_argument("disabled-action table: index out of range");
  }
  return disabled_[static_cast<std::size_t>(agent * num_ranges_ + range)];
}

std::set<int>& DisabledActionTable::cell(int agent, int range) {
  return const_cast<std::set<int>&>(
      static_cast<const DisabledActionTable*>(this)->cell(agent, range));
}

bool DisabledActionTable::is_disabled(int agent, int range, int action) const {
  return cell(agent, range).count(action) > 0;
}

bool DisabledActionTable::update(int agent, int range, int action) {
  if (action < 0 || action >= num_actions_) {
    throw std::invalid_argument("disabled-action table: action out of range");
  }
  std::set<int>& s = cell(agent, range);
  if (s.count(action) > 0) return false;  // idempotent
  if (static_cast<int>(s.size()) >= num_actions_ - 1) return false;  // cap
  s.insert(action);
  return true;
}

std::vector<int> DisabledActionTable::enabled_actions(int agent,
                                                      int range) const {
  const std::set<int>& s = cell(agent, range);
  std::vector<int> enabled;
  enabled.reserve(static_cast<std::size_t>(num_actions_));
  for (int a = 0; a < num_actions_; ++a) {
    if (s.count(a) == 0) enabled.push_back(a);
  }
  return enabled;
}

int DisabledActionTable::disabled_count(int agent, int range) const {
  return static_cast<int>(cell(agent, range).size());
}

long DisabledActionTable::total_disabled() const {
  long total = 0;
  for (const auto& s : disabled_) total += static_cast<long>(s.size());
  return total;
}

}  // namespace xrmarl::rl
