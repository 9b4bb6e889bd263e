#include "xrmarl/nn/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace xrmarl::nn {

std::vector<Matrix> finite_difference_gradients(
    const std::function<double()>& loss, std::span<Matrix* const> params,
    double step) {
  if (step <= 0.0) throw std::invalid_argument("finite differences: step must be > 0");
  std::vector<Matrix> grads;
  grads.reserve(params.size());
  for (Matrix* p : params) {
    Matrix g = Matrix::Zero(p->rows(), p->cols());
    for (Index j = 0; j < p->cols(); ++j) {
      for (Index i = 0; i < p->rows(); ++i) {
        const double saved = (*p)(i, j);
        (*p)(i, j) = saved + step;
        const double plus = loss();
        (*p)(i, j) = saved - step;
        const double minus = loss();
        (*p)(i, j) = saved;
        if (!std::isfinite(plus) || !std::isfinite(minus)) {
          throw std::runtime_error("finite differences: non-finite loss");
        }
        g(i, j) = (plus - minus) / (2.0 * step);
      }
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

GradCheckReport check_gradients(const std::vector<Matrix>& analytic,
                                const std::vector<Matrix>& numeric,
                                double tolerance) {
  if (analytic.size() != numeric.size()) {
    throw std::invalid_argument("check_gradients: parameter list mismatch");
  }
  GradCheckReport report;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const Matrix& a = analytic[k];
    const Matrix& n = numeric[k];
    if (a.rows() != n.rows() || a.cols() != n.cols()) {
      throw std::invalid_argument("check_gradients: gradient shape mismatch");
    }
    report.parameter_count += static_cast<std::size_t>(a.size());
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index i = 0; i < a.rows(); ++i) {
        const double denom =
            std::max({std::abs(a(i, j)), std::abs(n(i, j)), 1e-4});
        const double rel = std::abs(a(i, j) - n(i, j)) / denom;
        report.max_rel_error = std::max(report.max_rel_error, rel);
      }
    }
  }
  report.pass = report.max_rel_error < tolerance;
  return report;
}

}  // namespace xrmarl::nn
