#pragma once

#include <set>
#include <vector>

namespace xrmarl::rl {

// RLC buffer occupancy ranges driving the action filter:
//   [0, 0.96) [0.96, 0.97) [0.97, 0.98) [0.98, 0.99) [0.99, 1]
int buffer_range_index(double occupancy_ratio);
constexpr int kNumBufferRanges = 5;

// Per-(agent, buffer range) sets of disabled action indices. Sets only grow,
// and the cardinality cap (at most levels - 1 disabled) keeps at least one
// action selectable everywhere.
class DisabledActionTable {
 public:
  DisabledActionTable(int num_agents, int num_ranges, int num_actions);

  bool is_disabled(int agent, int range, int action) const;
  // Adds the action unless the set would reach full cardinality; returns
  // whether the set changed.
  bool update(int agent, int range, int action);

  std::vector<int> enabled_actions(int agent, int range) const;
  int disabled_count(int agent, int range) const;
  // Total entries across the table; monotone non-decreasing over a run.
  long total_disabled() const;

  int num_agents() const { return num_agents_; }
  int num_ranges() const { return num_ranges_; }
  int num_actions() const { return num_actions_; }

 private:
  const std::set<int>& cell(int agent, int range) const;
  std::set<int>& cell(int agent, int range);

  int num_agents_;
  int num_ranges_;
  int num_actions_;
  std::vector<std::set<int>> disabled_;
};

}  // namespace xrmarl::rl
