#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "xrmarl/common.hpp"
#include "xrmarl/rl/action_grid.hpp"
#include "xrmarl/sim/env.hpp"

namespace xrmarl::rl {

// Episodic cooperative environment as seen by the learner: per-agent
// observations, a global state for the mixer, a team reward, and the buffer
// range index feeding the action filter.
class TeamEnv {
 public:
  struct Outcome {
    double reward = 0.0;
    bool terminal = false;   // hard termination (no bootstrap)
    bool truncated = false;  // step limit reached
    bool failure = false;    // the done condition (a flow starved)
  };

  virtual ~TeamEnv() = default;

  virtual int num_agents() const = 0;
  virtual int num_actions() const = 0;
  virtual int obs_dim() const = 0;
  virtual int state_dim() const = 0;
  virtual int max_steps() const = 0;

  virtual void reset(std::uint64_t episode_seed) = 0;
  virtual Outcome step(const std::vector<int>& actions) = 0;

  virtual const std::vector<Vector>& observations() const = 0;
  virtual const Vector& state() const = 0;
  virtual int range_index() const = 0;
};

// Adapts the XR downlink simulator: one agent per traffic type, actions index
// each type's codec rate grid.
class XrTeamEnv final : public TeamEnv {
 public:
  XrTeamEnv(sim::ScenarioConfig config, int action_levels, std::uint64_t seed);

  int num_agents() const override { return sim::kNumTraffic; }
  int num_actions() const override { return levels_; }
  int obs_dim() const override { return sim::XrEnv::kObsDim; }
  int state_dim() const override { return env_.state_dim(); }
  int max_steps() const override { return env_.config().windows_per_episode; }

  void reset(std::uint64_t episode_seed) override;
  Outcome step(const std::vector<int>& actions) override;

  const std::vector<Vector>& observations() const override { return obs_; }
  const Vector& state() const override { return state_; }
  int range_index() const override;

  const sim::KpiWindow& last_kpi() const { return last_kpi_; }
  const std::array<double, sim::kNumTraffic>& last_rates() const {
    return last_rates_;
  }
  const CodecActionGrid& grid(int agent) const {
    return grids_[static_cast<std::size_t>(agent)];
  }
  sim::XrEnv& env() { return env_; }

 private:
  sim::XrEnv env_;
  std::vector<CodecActionGrid> grids_;
  int levels_;
  std::vector<Vector> obs_;
  Vector state_;
  sim::KpiWindow last_kpi_;
  std::array<double, sim::kNumTraffic> last_rates_{};
};

// One-shot cooperative matrix game: constant observation/state, episode
// length 1, team reward = payoff(joint action). A sanity harness for the
// value factorization.
class MatrixGameEnv final : public TeamEnv {
 public:
  explicit MatrixGameEnv(Matrix payoff);

  int num_agents() const override { return 2; }
  int num_actions() const override { return static_cast<int>(payoff_.rows()); }
  int obs_dim() const override { return 1; }
  int state_dim() const override { return 1; }
  int max_steps() const override { return 1; }

  void reset(std::uint64_t episode_seed) override;
  Outcome step(const std::vector<int>& actions) override;

  const std::vector<Vector>& observations() const override { return obs_; }
  const Vector& state() const override { return state_; }
  int range_index() const override { return 0; }

  const Matrix& payoff() const { return payoff_; }

 private:
  Matrix payoff_;
  std::vector<Vector> obs_;
  Vector state_;
};

}  // namespace xrmarl::rl
