#include "xrmarl/nn/gru.hpp"

#include <stdexcept>

#include "xrmarl/nn/activations.hpp"
#include "xrmarl/nn/init.hpp"

namespace xrmarl::nn {

namespace {

GruGate make_gate(Index input, Index hidden, std::uint64_t seed) {
  GruGate g;
  g.w_in = orthogonal_init(hidden, input, seed);
  g.w_rec = orthogonal_init(hidden, hidden, mix_seed(seed, 1));
  g.bias = Matrix::Zero(hidden, 1);
  return g;
}

Matrix gate_pre(const GruGate& g, const Matrix& x, const Matrix& h) {
  Matrix pre = g.w_in * x + g.w_rec * h;
  pre.colwise() += g.bias.col(0);
  return pre;
}

}  // namespace

GruCell make_gru(Index input, Index hidden, std::uint64_t seed) {
  GruCell cell;
  cell.update = make_gate(input, hidden, mix_seed(seed, 10));
  cell.reset = make_gate(input, hidden, mix_seed(seed, 20));
  cell.candidate = make_gate(input, hidden, mix_seed(seed, 30));
  cell.hidden_size = hidden;
  cell.input_size = input;
  return cell;
}

Matrix gru_step(const GruCell& cell, const Matrix& inputs,
                const Matrix& hidden) {
  if (inputs.rows() != cell.input_size || hidden.rows() != cell.hidden_size ||
      inputs.cols() != hidden.cols()) {
    throw std::invalid_argument("gru_step: dimension mismatch");
  }
  Matrix z = sigmoid(gate_pre(cell.update, inputs, hidden));
  Matrix r = sigmoid(gate_pre(cell.reset, inputs, hidden));
  Matrix c =
      gate_pre(cell.candidate, inputs, hidden.cwiseProduct(r)).array().tanh();
  return hidden + z.cwiseProduct(c - hidden);
}

Vector gru_step(const GruCell& cell, const Vector& input,
                const Vector& hidden) {
  return gru_step(cell, Matrix(input), Matrix(hidden)).col(0);
}

}  // namespace xrmarl::nn
