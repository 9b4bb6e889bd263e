#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xrmarl/nn/optimizer.hpp"
#include "xrmarl/rl/agent_net.hpp"
#include "xrmarl/rl/hyperparams.hpp"
#include "xrmarl/rl/masking.hpp"
#include "xrmarl/rl/mixer.hpp"
#include "xrmarl/rl/replay.hpp"
#include "xrmarl/rl/team_env.hpp"

namespace xrmarl::rl {

// Eq-style loss weight: full weight on underestimation, alpha otherwise
// (the equality case counts as "otherwise"); plain mixing runs with weight 1.
double optimistic_weight(double q_tot, double y, const Hyperparams& hp);

// Centralized-training learner over recurrent per-agent Q-networks and the
// monotone hypernetwork mixer, with buffer-range action masking.
class Learner {
 public:
  struct EpisodeResult {
    int steps = 0;
    double return_sum = 0.0;
    bool terminated = false;  // done condition hit
    bool success = false;     // ran the full window budget without done
    double epsilon = 0.0;     // schedule value at the first step
  };

  struct MaskAudit {
    long selections = 0;
    long disabled_returned = 0;  // must stay 0
    long table_updates = 0;
    long table_size = 0;
    bool table_monotone = true;
  };

  // step index within the episode, team reward, terminal flag
  using WindowHook = std::function<void(int, double, bool)>;

  Learner(const TeamEnv& shape, Hyperparams hp, std::uint64_t seed);

  // One rollout. training=true follows the epsilon schedule, stores the
  // episode, advances the step counters and updates the disabled-action
  // table on termination; training=false is a greedy evaluation rollout that
  // leaves all learner state untouched (the mask still applies).
  EpisodeResult run_episode(TeamEnv& env, std::uint64_t episode_seed,
                            bool training, const WindowHook& hook = {});

  bool can_train() const;
  // One gradient step on the weighted TD loss over a sampled batch. Returns
  // the loss, or nullopt when a non-finite loss/gradient forced a skip.
  std::optional<double> train_step();
  void hard_update();

  // Weighted TD loss over an explicit batch; with grads != nullptr also runs
  // backward and fills gradients in trainable_params() order. Exposed so the
  // finite-difference oracle can drive the exact training loss.
  double batch_loss(const std::vector<const Episode*>& batch,
                    std::vector<Matrix>* grads = nullptr);

  // Masked epsilon-greedy selection: explore uniformly; if the drawn action
  // is disabled for the current buffer range, re-enter the draw with the
  // exploit branch restricted to enabled actions.
  int select_action(const Vector& q, double eps, int agent, int range, Rng& rng);

  std::vector<int> greedy_joint_action(TeamEnv& env, std::uint64_t episode_seed);

  double epsilon() const { return epsilon_schedule(env_steps_, hp_); }
  long env_steps() const { return env_steps_; }
  long train_steps() const { return train_steps_; }
  long episodes_seen() const { return episodes_; }
  long skipped_train_steps() const { return skipped_train_steps_; }

  const Hyperparams& hyperparams() const { return hp_; }
  const DisabledActionTable& table() const { return table_; }
  DisabledActionTable& table() { return table_; }
  const MaskAudit& mask_audit() const { return audit_; }
  ReplayBuffer& replay() { return replay_; }
  std::vector<AgentNet>& agents() { return eval_agents_; }
  std::vector<AgentNet>& target_agents() { return target_agents_; }
  MixerNet& mixer() { return eval_mixer_; }
  MixerNet& target_mixer() { return target_mixer_; }
  nn::RmsProp& optimizer() { return optimizer_; }

  std::vector<Matrix*> trainable_params();
  std::vector<std::string> trainable_param_names() const;

  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

 private:
  Hyperparams hp_;
  int num_agents_;
  int num_actions_;
  int obs_dim_;
  int state_dim_;

  std::vector<AgentNet> eval_agents_;
  std::vector<AgentNet> target_agents_;
  MixerNet eval_mixer_;
  MixerNet target_mixer_;
  nn::RmsProp optimizer_;
  ReplayBuffer replay_;
  DisabledActionTable table_;
  MaskAudit audit_;

  Rng rng_action_;
  Rng rng_sample_;

  long env_steps_ = 0;
  long train_steps_ = 0;
  long episodes_ = 0;
  long skipped_train_steps_ = 0;
};

}  // namespace xrmarl::rl
