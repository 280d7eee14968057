#pragma once

#include <span>

namespace swflow {

/// Standard normal density.
double normal_pdf(double x);
/// Standard normal CDF via erfc (accurate in both tails).
double normal_cdf(double x);
/// Inverse standard normal CDF for p in (0,1): Acklam's rational approximation
/// followed by one Newton step on erfc; absolute error below 1e-12 on
/// [1e-300, 1 - 1e-16].
double normal_quantile(double p);

/// Gauss-Legendre rule with 32 nodes on [-1, 1].
struct GaussLegendre32 {
  static constexpr int kNodes = 32;
  double nodes[kNodes];
  double weights[kNodes];
};
const GaussLegendre32& gauss_legendre32();

/// E|<theta, e_1>| for theta uniform on S^{d-1}; equals 2/pi for d = 2.
double sphere_abs_moment(int dim);

}  // namespace swflow
