#include "swflow/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "swflow/kernels.hpp"

namespace swflow {

SortPermutation sort_projection(std::span<const double> values) {
  const std::size_t n = values.size();
  SortPermutation s;
  s.perm.resize(n);
  std::iota(s.perm.begin(), s.perm.end(), std::size_t{0});
  std::sort(s.perm.begin(), s.perm.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  s.inverse.resize(n);
  for (std::size_t r = 0; r < n; ++r) s.inverse[s.perm[r]] = r;
  return s;
}

double w2sq_semidiscrete(std::span<const double> proj, const CellTable& table) {
  if (proj.size() != table.n)
    throw std::invalid_argument("w2sq_semidiscrete: " + std::to_string(proj.size()) +
                                " projections against a table built for N = " + std::to_string(table.n));
  std::vector<double> sorted(proj.begin(), proj.end());
  std::sort(sorted.begin(), sorted.end());
  const double transport = active_kernels().sq_diff_sum(sorted.data(), table.barycenters.data(), table.n);
  return (transport + table.variance_sum) / static_cast<double>(table.n);
}

double wpp_discrete(std::span<const double> x, std::span<const double> y, double p) {
  if (x.size() != y.size())
    throw std::invalid_argument("wpp_discrete: length mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  if (x.empty()) throw std::invalid_argument("wpp_discrete: empty input");
  if (!(p >= 1.0)) throw std::domain_error("wpp_discrete: p must be >= 1");
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += std::pow(std::abs(xs[i] - ys[i]), p);
  return s / static_cast<double>(xs.size());
}

}  // namespace swflow
