#pragma once

#include <cstddef>
#include <cstdint>

namespace swflow {

// Inner loops of the energy/gradient evaluation. Coordinates are passed as
// structure-of-arrays: coords[k] points at the N values of coordinate k.
//
// Every variant must match the scalar reference bit-for-bit on the
// elementwise kernels (project, gather_residual, accumulate, min_sq_dist);
// sq_diff_sum is a compensated reduction whose lane order may differ.
struct KernelTable {
  const char* name;

  // out[i] = sum_k coords[k][i] * theta[k], accumulated in k order.
  void (*project)(const double* const* coords, std::size_t dim, std::size_t n, const double* theta,
                  double* out);

  // out[i] = a[i] - b[rank[i]]
  void (*gather_residual)(const double* a, const double* b, const std::uint32_t* rank, std::size_t n,
                          double* out);

  // grad[k][i] += (w * coeff[i]) * theta[k]
  void (*accumulate)(double* const* grad, std::size_t dim, std::size_t n, const double* coeff, double w,
                     const double* theta);

  // Compensated sum_i (x[i] - y[i])^2.
  double (*sq_diff_sum)(const double* x, const double* y, std::size_t n);

  // min_{begin <= j < n} sum_k (coords[k][j] - q[k])^2, +inf when the range is empty.
  double (*min_sq_dist)(const double* const* coords, std::size_t dim, std::size_t n, const double* q,
                        std::size_t begin);
};

const KernelTable& scalar_kernels();

/// AVX2 variant, or nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Selected once: AVX2 when available unless SWFLOW_SIMD=scalar.
const KernelTable& active_kernels();

}  // namespace swflow
