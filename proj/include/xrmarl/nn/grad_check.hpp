#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "xrmarl/common.hpp"

namespace xrmarl::nn {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t parameter_count = 0;
  bool pass = false;
};

// Central differences (L(p+d) - L(p-d)) / (2d) for every entry of every
// parameter matrix. The loss callback must be deterministic and must read the
// parameters through the given pointers. Throws on a non-finite loss.
std::vector<Matrix> finite_difference_gradients(
    const std::function<double()>& loss, std::span<Matrix* const> params,
    double step = 1e-5);

// Compares analytic gradients against the finite-difference oracle.
// Relative error per entry: |a - n| / max(|a|, |n|, 1e-4); the floor absorbs
// central-difference noise on near-zero gradients.
GradCheckReport check_gradients(const std::vector<Matrix>& analytic,
                                const std::vector<Matrix>& numeric,
                                double tolerance = 1e-4);

}  // namespace xrmarl::nn
