#include "xrmarl/nn/init.hpp"

#include <algorithm>
#include <stdexcept>

namespace xrmarl::nn {

Matrix orthogonal_init(Index rows, Index cols, std::uint64_t seed,
                       double gain) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("orthogonal_init: rows and cols must be >= 1");
  }
  const Index big = std::max(rows, cols);
  const Index small = std::min(rows, cols);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(big, small);
  for (Index j = 0; j < small; ++j) {
    for (Index i = 0; i < big; ++i) {
      g(i, j) = gauss(rng);
    }
  }

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(big, small);
  const Matrix& qrm = qr.matrixQR();
  for (Index j = 0; j < small; ++j) {
    if (qrm(j, j) < 0.0) q.col(j) = -q.col(j);
  }

  Matrix m = (rows >= cols) ? q : Matrix(q.transpose());
  return gain * m;
}

}  // namespace xrmarl::nn
