#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "swflow/point_cloud.hpp"
#include "swflow/swgrad.hpp"

namespace swflow {

enum class StopReason { Converged, MaxIters, Diverged };
std::string to_string(StopReason r);

/// Fixed-step gradient descent settings. The step is lambda = step_multiple * N.
struct DescentConfig {
  double step_multiple = 2.0;
  std::size_t max_iters = 200;
  std::optional<double> grad_tol;  // default 1e-8 * N
  double divergence_factor = 10.0;

  double step(std::size_t n) const { return step_multiple * static_cast<double>(n); }
  double tolerance(std::size_t n) const { return grad_tol.value_or(1e-8 * static_cast<double>(n)); }
};

/// One row per iterate X^k. lemma_slack compares the realized decrease with
/// the descent-lemma guarantee:
///   F(X^{k+1}) - F(X^k) + lambda (1 - lambda / (2 N d)) |grad F(X^k)|^2,
/// and is NaN on the final row (no successor).
struct TraceRow {
  std::size_t k = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double min_sep = 0.0;
  double lemma_slack = 0.0;
};

struct DescentTrace {
  std::vector<TraceRow> rows;
  StopReason stop = StopReason::MaxIters;
  double step = 0.0;
  // max_i |X_i^{k+1} - d sum_l w_l b theta_l| over all steps when lambda = N d
  // and the directions integrate theta theta^T to I/d; NaN otherwise.
  double barycentric_update_deviation = 0.0;

  std::size_t steps() const { return rows.empty() ? 0 : rows.size() - 1; }
  void write_csv(std::ostream& out, const std::string& preamble) const;
};

struct DescentResult {
  PointCloud cloud;
  DescentTrace trace;
  GradientReport final_report;
};

/// Iterates X <- X - lambda grad F(X) until grad_norm <= tol, max_iters steps,
/// or the energy exceeds divergence_factor times its initial value.
/// Throws OnDiagonalError if X0 (or an iterate) has coincident particles.
DescentResult run_descent(const PointCloud& x0, const SlicedEvaluator& eval, const DescentConfig& cfg);
DescentResult run_descent(const PointCloud& x0, const ProjectedTarget& target, const DirectionSet& dirs,
                          const DescentConfig& cfg);

/// N points uniform in [lo, hi]^dim from a seeded 64-bit Mersenne twister.
PointCloud uniform_box_cloud(std::size_t n, std::size_t dim, double lo, double hi, std::uint64_t seed);

/// d C(d) / (N beta) with C(d) = 2 int_{<theta,theta0> > 0} <theta,theta0> dtheta.
struct SeparationCheck {
  std::optional<double> bound;
  bool satisfied = false;
  double min_separation = 0.0;
};
double separation_constant(std::size_t dim);
SeparationCheck check_separation_bound(const PointCloud& x, const ProjectedTarget& target);

/// Energy-vs-iteration columns, one descent per step multiple, all from x0.
struct SweepTable {
  std::vector<double> multiples;
  std::vector<DescentTrace> traces;

  void write_csv(std::ostream& out, const std::string& preamble) const;
};

SweepTable step_size_sweep(const PointCloud& x0, const SlicedEvaluator& eval, const std::vector<double>& multiples,
                           std::size_t iters);

}  // namespace swflow
