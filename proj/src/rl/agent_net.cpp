#include "xrmarl/rl/agent_net.hpp"

#include <stdexcept>

namespace xrmarl::rl {

AgentNet make_agent_net(int obs_dim, int num_actions, int hidden,
                        std::uint64_t seed) {
  AgentNet net;
  net.obs_dim = obs_dim;
  net.num_actions = num_actions;
  net.hidden_dim = hidden;
  net.input = nn::make_dense(obs_dim + num_actions, hidden,
                             nn::Activation::relu, mix_seed(seed, 1));
  net.gru = nn::make_gru(hidden, hidden, mix_seed(seed, 2));
  net.head = nn::make_dense(hidden, num_actions, nn::Activation::identity,
                            mix_seed(seed, 3));
  return net;
}

std::pair<Matrix, Matrix> agent_q(const AgentNet& net, const Matrix& obs,
                                  const Matrix& last_action_onehot,
                                  const Matrix& hidden) {
  if (obs.rows() != net.obs_dim ||
      last_action_onehot.rows() != net.num_actions ||
      hidden.rows() != net.hidden_dim || obs.cols() != hidden.cols() ||
      obs.cols() != last_action_onehot.cols()) {
    throw std::invalid_argument("agent_q: dimension mismatch");
  }
  Matrix x(net.obs_dim + net.num_actions, obs.cols());
  x.topRows(net.obs_dim) = obs;
  x.bottomRows(net.num_actions) = last_action_onehot;
  Matrix features = nn::dense_forward(net.input, x);
  Matrix next_hidden = nn::gru_step(net.gru, features, hidden);
  Matrix q = nn::dense_forward(net.head, next_hidden);
  return {std::move(q), std::move(next_hidden)};
}

std::pair<Vector, Vector> agent_q(const AgentNet& net, const Vector& obs,
                                  const Vector& last_action_onehot,
                                  const Vector& hidden) {
  auto [q, h] = agent_q(net, Matrix(obs), Matrix(last_action_onehot), Matrix(hidden));
  return {Vector(q.col(0)), Vector(h.col(0))};
}

std::vector<Matrix*> params(AgentNet& net) {
  return {&net.input.weights,        &net.input.bias,
          &net.gru.update.w_in,      &net.gru.update.w_rec,
          &net.gru.update.bias,      &net.gru.reset.w_in,
          &net.gru.reset.w_rec,      &net.gru.reset.bias,
          &net.gru.candidate.w_in,   &net.gru.candidate.w_rec,
          &net.gru.candidate.bias,   &net.head.weights,
          &net.head.bias};
}

std::vector<std::string> param_names(const AgentNet&, const std::string& prefix) {
  return {prefix + ".input.w",  prefix + ".input.b",  prefix + ".gru.wz",
          prefix + ".gru.uz",   prefix + ".gru.bz",   prefix + ".gru.wr",
          prefix + ".gru.ur",   prefix + ".gru.br",   prefix + ".gru.wh",
          prefix + ".gru.uh",   prefix + ".gru.bh",   prefix + ".head.w",
          prefix + ".head.b"};
}

}  // namespace xrmarl::rl
