#include "xrmarl/rl/mixer.hpp"

#include <stdexcept>

#include "xrmarl/nn/activations.hpp"

namespace xrmarl::rl {

MixerNet make_mixer(int n_agents, int state_dim, int embed_dim,
                    int hyper_hidden, std::uint64_t seed) {
  MixerNet net;
  net.n_agents = n_agents;
  net.state_dim = state_dim;
  net.embed_dim = embed_dim;
  using nn::Activation;
  net.hyper_w1_1 = nn::make_dense(state_dim, hyper_hidden, Activation::relu,
                                  mix_seed(seed, 1));
  net.hyper_w1_2 = nn::make_dense(hyper_hidden, embed_dim * n_agents,
                                  Activation::identity, mix_seed(seed, 2));
  net.hyper_b1 =
      nn::make_dense(state_dim, embed_dim, Activation::identity, mix_seed(seed, 3));
  net.hyper_w2_1 = nn::make_dense(state_dim, hyper_hidden, Activation::relu,
                                  mix_seed(seed, 4));
  net.hyper_w2_2 = nn::make_dense(hyper_hidden, embed_dim, Activation::identity,
                                  mix_seed(seed, 5));
  net.hyper_v_1 = nn::make_dense(state_dim, hyper_hidden, Activation::relu,
                                 mix_seed(seed, 6));
  net.hyper_v_2 =
      nn::make_dense(hyper_hidden, 1, Activation::identity, mix_seed(seed, 7));
  return net;
}

Matrix mix(const MixerNet& net, const Matrix& agent_qs, const Matrix& states) {
  if (agent_qs.rows() != net.n_agents || states.rows() != net.state_dim ||
      agent_qs.cols() != states.cols()) {
    throw std::invalid_argument("mix: dimension mismatch");
  }
  const Index batch = agent_qs.cols();
  const Matrix w1cols =
      nn::dense_forward(net.hyper_w1_2, nn::dense_forward(net.hyper_w1_1, states))
          .cwiseAbs();
  const Matrix b1 = nn::dense_forward(net.hyper_b1, states);
  const Matrix w2cols =
      nn::dense_forward(net.hyper_w2_2, nn::dense_forward(net.hyper_w2_1, states))
          .cwiseAbs();
  const Matrix v = nn::dense_forward(
      net.hyper_v_2, nn::dense_forward(net.hyper_v_1, states));

  Matrix out(1, batch);
  for (Index j = 0; j < batch; ++j) {
    Eigen::Map<const Matrix> w1(w1cols.col(j).data(), net.embed_dim, net.n_agents);
    Vector hidden = nn::elu(Vector(w1 * agent_qs.col(j) + b1.col(j)));
    out(0, j) = w2cols.col(j).dot(hidden) + v(0, j);
  }
  return out;
}

double mix(const MixerNet& net, const Vector& agent_qs, const Vector& state) {
  return mix(net, Matrix(agent_qs), Matrix(state))(0, 0);
}

std::vector<Matrix*> params(MixerNet& net) {
  return {&net.hyper_w1_1.weights, &net.hyper_w1_1.bias,
          &net.hyper_w1_2.weights, &net.hyper_w1_2.bias,
          &net.hyper_b1.weights,   &net.hyper_b1.bias,
          &net.hyper_w2_1.weights, &net.hyper_w2_1.bias,
          &net.hyper_w2_2.weights, &net.hyper_w2_2.bias,
          &net.hyper_v_1.weights,  &net.hyper_v_1.bias,
          &net.hyper_v_2.weights,  &net.hyper_v_2.bias};
}

std::vector<std::string> param_names(const MixerNet&, const std::string& prefix) {
  return {prefix + ".hw1_1.w", prefix + ".hw1_1.b", prefix + ".hw1_2.w",
          prefix + ".hw1_2.b", prefix + ".hb1.w",   prefix + ".hb1.b",
          prefix + ".hw2_1.w", prefix + ".hw2_1.b", prefix + ".hw2_2.w",
          prefix + ".hw2_2.b", prefix + ".hv1.w",   prefix + ".hv1.b",
          prefix + ".hv2.w",   prefix + ".hv2.b"};
}

}  // namespace xrmarl::rl
