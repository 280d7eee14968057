#include <cmath>
#include <limits>

#include "swflow/kernels.hpp"

namespace swflow {

namespace {

void project_scalar(const double* const* coords, std::size_t dim, std::size_t n, const double* theta,
                    double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = coords[0][i] * theta[0];
  for (std::size_t k = 1; k < dim; ++k) {
    const double t = theta[k];
    const double* c = coords[k];
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + c[i] * t;
  }
}

void gather_residual_scalar(const double* a, const double* b, const std::uint32_t* rank, std::size_t n,
                            double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[rank[i]];
}

void accumulate_scalar(double* const* grad, std::size_t dim, std::size_t n, const double* coeff, double w,
                       const double* theta) {
  for (std::size_t k = 0; k < dim; ++k) {
    const double t = theta[k];
    double* g = grad[k];
    for (std::size_t i = 0; i < n; ++i) g[i] = g[i] + (w * coeff[i]) * t;
  }
}

double sq_diff_sum_scalar(const double* x, const double* y, std::size_t n) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    const double term = d * d - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

double min_sq_dist_scalar(const double* const* coords, std::size_t dim, std::size_t n, const double* q,
                          std::size_t begin) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = begin; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = coords[k][j] - q[k];
      s = s + d * d;
    }
    if (s < best) best = s;
  }
  return best;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",        project_scalar,     gather_residual_scalar,
                                 accumulate_scalar, sq_diff_sum_scalar, min_sq_dist_scalar};
  return table;
}

}  // namespace swflow
