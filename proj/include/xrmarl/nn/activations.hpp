#pragma once

#include <cmath>
#include <stdexcept>

#include "xrmarl/common.hpp"

namespace xrmarl::nn {

enum class Activation { identity, relu, tanh, sigmoid, abs };

// Element-wise activations as expression-friendly free functions.
template <class Derived>
Matrix sigmoid(const Eigen::MatrixBase<Derived>& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

template <class Derived>
Matrix elu(const Eigen::MatrixBase<Derived>& x) {
  return x.array().max(0.0).matrix() +
         (x.array().min(0.0).exp() - 1.0).matrix();
}

inline Matrix apply_activation(Activation act, const Matrix& x) {
  switch (act) {
    case Activation::identity:
      return x;
    case Activation::relu:
      return x.cwiseMax(0.0);
    case Activation::tanh:
      return x.array().tanh().matrix();
    case Activation::sigmoid:
      return sigmoid(x);
    case Activation::abs:
      return x.cwiseAbs();
  }
  throw std::invalid_argument("unknown activation");
}

// d(activation)/d(pre-activation), element-wise, given both the input and the
// already-computed output. abs uses the sign subgradient (0 at exactly 0).
inline Matrix activation_grad(Activation act, const Matrix& pre,
                              const Matrix& post) {
  switch (act) {
    case Activation::identity:
      return Matrix::Ones(pre.rows(), pre.cols());
    case Activation::relu:
      return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::tanh:
      return (1.0 - post.array().square()).matrix();
    case Activation::sigmoid:
      return (post.array() * (1.0 - post.array())).matrix();
    case Activation::abs:
      return pre.array().sign().matrix();
  }
  throw std::invalid_argument("unknown activation");
}

}  // namespace xrmarl::nn
