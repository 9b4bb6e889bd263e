#pragma once

#include <string>
#include <vector>

#include "xrmarl/nn/dense.hpp"

namespace xrmarl::rl {

// Monotone mixing network. State-conditioned hypernetworks generate the
// mixer weights; absolute values keep every mixing weight non-negative, so
// Q_tot is non-decreasing in every agent Q:
//   W1 = |hyper_w1(s)|  (embed x n_agents)    b1 = hyper_b1(s)
//   w2 = |hyper_w2(s)|  (embed)               b2 = hyper_v(s)  (2-layer)
//   Q_tot = w2^T elu(W1 q + b1) + b2
struct MixerNet {
  nn::DenseLayer hyper_w1_1;  // state -> hyper hidden, relu
  nn::DenseLayer hyper_w1_2;  // hyper hidden -> embed * n_agents
  nn::DenseLayer hyper_b1;    // state -> embed
  nn::DenseLayer hyper_w2_1;  // state -> hyper hidden, relu
  nn::DenseLayer hyper_w2_2;  // hyper hidden -> embed
  nn::DenseLayer hyper_v_1;   // state -> hyper hidden, relu
  nn::DenseLayer hyper_v_2;   // hyper hidden -> 1
  int n_agents = 0;
  int state_dim = 0;
  int embed_dim = 0;
};

MixerNet make_mixer(int n_agents, int state_dim, int embed_dim,
                    int hyper_hidden, std::uint64_t seed);

double mix(const MixerNet& net, const Vector& agent_qs, const Vector& state);
// Batched: one sample per column; returns a 1 x B row.
Matrix mix(const MixerNet& net, const Matrix& agent_qs, const Matrix& states);

std::vector<Matrix*> params(MixerNet& net);
std::vector<std::string> param_names(const MixerNet& net, const std::string& prefix);

}  // namespace xrmarl::rl
