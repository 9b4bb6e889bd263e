#pragma once

#include <span>
#include <vector>

#include "xrmarl/common.hpp"

namespace xrmarl::nn {

struct RmsPropConfig {
  double learning_rate = 8e-3;
  double decay = 0.99;
  double epsilon = 1e-5;
};

// Root-mean-square propagation:
//   m <- decay * m + (1 - decay) * g^2
//   p <- p - lr * g / (sqrt(m) + epsilon)
// State is positional: the same parameter list (same order, same shapes)
// must be passed to every step.
class RmsProp {
 public:
  explicit RmsProp(RmsPropConfig config = {});

  // Throws std::runtime_error on any non-finite gradient; in that case no
  // parameter and no accumulator is modified.
  void step(std::span<Matrix* const> params, std::span<const Matrix> grads);

  const RmsPropConfig& config() const { return config_; }
  const std::vector<Matrix>& accumulators() const { return mean_square_; }
  std::vector<Matrix>& accumulators() { return mean_square_; }

 private:
  RmsPropConfig config_;
  std::vector<Matrix> mean_square_;
};

}  // namespace xrmarl::nn
