#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xrmarl/nn/dense.hpp"
#include "xrmarl/nn/gru.hpp"

namespace xrmarl::rl {

// Recurrent per-agent Q-network: dense(obs + one-hot last own action) ->
// relu -> GRU -> linear head over the action levels. Evaluation and target
// copies share this type.
struct AgentNet {
  nn::DenseLayer input;   // (obs_dim + num_actions) -> hidden, relu
  nn::GruCell gru;        // hidden -> hidden
  nn::DenseLayer head;    // hidden -> num_actions, identity
  int obs_dim = 0;
  int num_actions = 0;
  int hidden_dim = 0;
};

AgentNet make_agent_net(int obs_dim, int num_actions, int hidden,
                        std::uint64_t seed);

// One recurrent step; hidden starts as zeros at the episode boundary.
// Returns (Q-vector over actions, new hidden).
std::pair<Vector, Vector> agent_q(const AgentNet& net, const Vector& obs,
                                  const Vector& last_action_onehot,
                                  const Vector& hidden);
// Batched: every argument carries one column per sample.
std::pair<Matrix, Matrix> agent_q(const AgentNet& net, const Matrix& obs,
                                  const Matrix& last_action_onehot,
                                  const Matrix& hidden);

std::vector<Matrix*> params(AgentNet& net);
std::vector<std::string> param_names(const AgentNet& net, const std::string& prefix);

}  // namespace xrmarl::rl
