#pragma once

#include <cstdint>

#include "xrmarl/common.hpp"

namespace xrmarl::nn {

// Orthogonal weight initialization from the QR decomposition of a Gaussian
// draw, with the R-diagonal sign fix so the result is Haar-distributed.
// rows <= cols gives orthonormal rows (M M^T = I), rows >= cols orthonormal
// columns (M^T M = I). Deterministic for a fixed seed.
Matrix orthogonal_init(Index rows, Index cols, std::uint64_t seed,
                       double gain = 1.0);

}  // namespace xrmarl::nn
