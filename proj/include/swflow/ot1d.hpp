#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swflow/measure1d.hpp"

namespace swflow {

/// perm[r] is the index of the r-th smallest value (0-based); inverse[i] is
/// the rank of value i. Ties keep index order.
struct SortPermutation {
  std::vector<std::size_t> perm;
  std::vector<std::size_t> inverse;
};

SortPermutation sort_projection(std::span<const double> values);

/// W_2^2 between the uniform measure on `proj` and the target projection
/// described by `table`: sum_r int_{V_r} (proj[perm[r]] - x)^2.
double w2sq_semidiscrete(std::span<const double> proj, const CellTable& table);

/// Sorted-matching cost (1/N) sum_i |x_(i) - y_(i)|^p.
double wpp_discrete(std::span<const double> x, std::span<const double> y, double p);

}  // namespace swflow
