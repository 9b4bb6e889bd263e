#include "xrmarl/nn/optimizer.hpp"

#include <stdexcept>

namespace xrmarl::nn {

RmsProp::RmsProp(RmsPropConfig config) : config_(config) {
  if (config_.learning_rate <= 0.0) {
    throw std::invalid_argument("RmsProp: learning rate must be > 0");
  }
  if (config_.decay < 0.0 || config_.decay >= 1.0) {
    throw std::invalid_argument("RmsProp: decay must be in [0, 1)");
  }
}

void RmsProp::step(std::span<Matrix* const> params,
                   std::span<const Matrix> grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("RmsProp: params/grads size mismatch");
  }
  if (mean_square_.empty()) {
    mean_square_.reserve(params.size());
    for (const Matrix* p : params) {
      mean_square_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (mean_square_.size() != params.size()) {
    throw std::invalid_argument("RmsProp: parameter list changed between steps");
  }
  // Validate everything before touching any state.
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (grads[k].rows() != params[k]->rows() ||
        grads[k].cols() != params[k]->cols()) {
      throw std::invalid_argument("RmsProp: gradient shape mismatch");
    }
    if (!grads[k].allFinite()) {
      throw std::runtime_error("RmsProp: non-finite gradient");
    }
  }
  const double rho = config_.decay;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& m = mean_square_[k];
    m = rho * m + (1.0 - rho) * grads[k].cwiseProduct(grads[k]);
    params[k]->array() -=
        config_.learning_rate * grads[k].array() /
        (m.array().sqrt() + config_.epsilon);
  }
}

}  // namespace xrmarl::nn
