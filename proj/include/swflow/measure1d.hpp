#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace swflow {

/// Per-direction cell data for an N-point source: the target's projection is
/// split into N consecutive pieces of mass 1/N (Power cells), cell i (0-based)
/// being the preimage of [i/N, (i+1)/N] under the quantile function.
struct CellTable {
  std::size_t theta_index = 0;
  std::size_t n = 0;
  std::vector<double> barycenters;     // b_i = N * int_{V_i} x
  std::vector<double> second_moments;  // m_i = N * int_{V_i} x^2
  std::vector<double> variances;       // m_i - b_i^2, computed without cancellation where possible
  std::vector<double> masses;          // each 1/N
  double variance_sum = 0.0;           // sum_i variances[i], in index order
};

/// Uniform law on [lo, hi], lo < hi.
struct UniformInterval {
  double lo;
  double hi;
};

/// Normal law N(mean, sigma^2).
struct Normal1D {
  double mean;
  double sigma;
};

/// Finitely supported law. Values are strictly increasing (ties merged),
/// masses positive and normalized; cumulative[j] = masses[0] + ... + masses[j]
/// with the last entry pinned to 1.
struct Atomic1D {
  std::vector<double> values;
  std::vector<double> masses;
  std::vector<double> cumulative;

  static Atomic1D from_unsorted(std::vector<double> values, std::vector<double> masses);
};

using Measure1D = std::variant<UniformInterval, Normal1D, Atomic1D>;

double quantile(const Measure1D& m, double t);
double mean(const Measure1D& m);
std::optional<double> density_bound(const Measure1D& m);

CellTable cell_table(const Measure1D& m, std::size_t n);

/// int_{V_i} sgn(a - x) |a - x|^{p-1} d rho(x), cell index i is 0-based.
double cell_integral_p(const Measure1D& m, std::size_t n, std::size_t i, double a, double p);

/// int_{V_i} |a - x|^p d rho(x).
double cell_abs_moment_p(const Measure1D& m, std::size_t n, std::size_t i, double a, double p);

/// One piece of the monotone block decomposition of an atomic law: `mass` of
/// the atom at `value` assigned to block `block`.
struct BlockPiece {
  std::size_t block;
  double value;
  double mass;
};

/// Sweeps cumulative mass and splits atoms that straddle a boundary k/N.
std::vector<BlockPiece> block_decomposition(const Atomic1D& m, std::size_t n);

}  // namespace swflow
