#pragma once

#include <cstdint>

#include "xrmarl/nn/activations.hpp"

namespace xrmarl::nn {

// Fully connected layer. Bias is stored as an n x 1 matrix so that all
// trainable parameters share one type for the optimizer / checkpoint path.
struct DenseLayer {
  Matrix weights;  // out x in
  Matrix bias;     // out x 1
  Activation activation = Activation::identity;

  Index in_dim() const { return weights.cols(); }
  Index out_dim() const { return weights.rows(); }
};

DenseLayer make_dense(Index in, Index out, Activation act, std::uint64_t seed);

// y = act(W x + b). The matrix overload treats each column as one sample.
Vector dense_forward(const DenseLayer& layer, const Vector& input);
Matrix dense_forward(const DenseLayer& layer, const Matrix& inputs);

}  // namespace xrmarl::nn
