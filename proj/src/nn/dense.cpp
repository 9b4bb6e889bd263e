#include "xrmarl/nn/dense.hpp"

#include <stdexcept>

#include "xrmarl/nn/init.hpp"

namespace xrmarl::nn {

DenseLayer make_dense(Index in, Index out, Activation act,
                      std::uint64_t seed) {
  DenseLayer layer;
  layer.weights = orthogonal_init(out, in, seed);
  layer.bias = Matrix::Zero(out, 1);
  layer.activation = act;
  return layer;
}

Matrix dense_forward(const DenseLayer& layer, const Matrix& inputs) {
  if (inputs.rows() != layer.weights.cols()) {
    throw std::invalid_argument("dense_forward: input dimension mismatch");
  }
  if (layer.bias.rows() != layer.weights.rows()) {
    throw std::invalid_argument("dense_forward: bias dimension mismatch");
  }
  Matrix pre = layer.weights * inputs;
  pre.colwise() += layer.bias.col(0);
  return apply_activation(layer.activation, pre);
}

Vector dense_forward(const DenseLayer& layer, const Vector& input) {
  return dense_forward(layer, Matrix(input)).col(0);
}

}  // namespace xrmarl::nn
