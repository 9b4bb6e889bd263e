#include "xrmarl/rl/team_env.hpp"

#include <stdexcept>

#include "xrmarl/rl/masking.hpp"

namespace xrmarl::rl {

XrTeamEnv::XrTeamEnv(sim::ScenarioConfig config, int action_levels,
                     std::uint64_t seed)
    : env_(std::move(config), seed), levels_(action_levels) {
  for (const sim::FlowSpec& spec : env_.config().flows) {
    grids_.emplace_back(spec.min_rate_mbps, spec.max_rate_mbps, action_levels);
  }
  reset(seed);
}

void XrTeamEnv::reset(std::uint64_t episode_seed) {
  env_.reset(episode_seed);
  obs_.assign(env_.observations().begin(), env_.observations().end());
  state_ = env_.state();
  last_kpi_ = sim::KpiWindow{};
  last_rates_ = {0.0, 0.0, 0.0};
}

int XrTeamEnv::range_index() const {
  return buffer_range_index(env_.buffer_occupancy());
}

TeamEnv::Outcome XrTeamEnv::step(const std::vector<int>& actions) {
  if (static_cast<int>(actions.size()) != num_agents()) {
    throw std::invalid_argument("XrTeamEnv: one action per agent required");
  }
  std::array<double, sim::kNumTraffic> rates{};
  for (int a = 0; a < num_agents(); ++a) {
    rates[static_cast<std::size_t>(a)] =
        grids_[static_cast<std::size_t>(a)].rate(actions[static_cast<std::size_t>(a)]);
  }
  sim::StepResult result = env_.step_window(rates);
  obs_.assign(result.observations.begin(), result.observations.end());
  state_ = result.state;
  last_kpi_ = result.kpi;
  last_rates_ = rates;

  Outcome out;
  out.reward = result.team_reward;
  out.terminal = result.done;
  out.truncated = !result.done && env_.done();
  out.failure = result.done;
  return out;
}

MatrixGameEnv::MatrixGameEnv(Matrix payoff) : payoff_(std::move(payoff)) {
  if (payoff_.rows() != payoff_.cols() || payoff_.rows() < 2) {
    throw std::invalid_argument("matrix game: square payoff of size >= 2 required");
  }
  obs_.assign(2, Vector::Ones(1));
  state_ = Vector::Ones(1);
}

void MatrixGameEnv::reset(std::uint64_t) {}

TeamEnv::Outcome MatrixGameEnv::step(const std::vector<int>& actions) {
  if (actions.size() != 2) {
    throw std::invalid_argument("matrix game: exactly two agents");
  }
  Outcome out;
  out.reward = payoff_(actions[0], actions[1]);
  out.terminal = true;
  return out;
}

}  // namespace xrmarl::rl
