#pragma once

#include <cstdint>
#include <vector>

#include "xrmarl/common.hpp"

namespace xrmarl::rl {

// One rollout. Point arrays (observations, states, buffer ranges) hold T + 1
// entries, step arrays (actions, rewards) hold T. terminated distinguishes a
// real termination (no bootstrap) from a window-limit truncation.
struct Episode {
  std::vector<Matrix> obs;           // per agent: obs_dim x (T + 1)
  Matrix states;                     // state_dim x (T + 1)
  std::vector<std::vector<int>> actions;  // [agent][t], 0..T-1
  std::vector<double> rewards;       // 0..T-1
  std::vector<int> ranges;           // buffer range per point, 0..T
  bool terminated = false;

  int length() const { return static_cast<int>(rewards.size()); }
};

// Fixed-capacity episode store; evicts oldest first. Sampling is uniform
// without replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity);

  void push(Episode episode);
  std::vector<const Episode*> sample(int batch, Rng& rng) const;

  int size() const { return static_cast<int>(episodes_.size()); }
  int capacity() const { return capacity_; }
  std::int64_t total_pushed() const { return total_pushed_; }

 private:
  int capacity_;
  std::size_t next_ = 0;  // ring cursor once full
  std::int64_t total_pushed_ = 0;
  std::vector<Episode> episodes_;
};

}  // namespace xrmarl::rl
