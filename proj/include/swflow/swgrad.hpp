#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "swflow/directions.hpp"
#include "swflow/measure1d.hpp"
#include "swflow/point_cloud.hpp"
#include "swflow/targets.hpp"

namespace swflow {

/// Gradient of F at a point cloud, plus the criticality residual field
/// v(X_i) = N grad_i (only for p = 2).
struct GradientReport {
  std::size_t n = 0;
  std::size_t dim = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  std::vector<double> grads;      // row-major N x d
  std::vector<double> residuals;  // row-major N x d; empty when p != 2

  double residual_max_norm() const;  // max_i |v(X_i)|
  nlohmann::json to_json() const;
};

/// Energy and gradients of F(X) = (1/2) sum_l w_l W_2^2(<X, theta_l>, rho_theta_l)
/// for clouds of a fixed size N. Cell tables of the target are computed once
/// per direction at construction.
///
/// Per-direction work may run on several threads; partial results are merged
/// serially in direction order, so every result is independent of the
/// worker count.
class SlicedEvaluator {
 public:
  SlicedEvaluator(ProjectedTarget target, DirectionSet dirs, std::size_t n, std::size_t threads = 0);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return dirs_.dim(); }
  const DirectionSet& directions() const { return dirs_; }
  const ProjectedTarget& target() const { return target_; }
  const CellTable& table(std::size_t l) const { return tables_[l]; }

  /// W_2^2 between the projected cloud and rho_theta_l, one entry per direction.
  std::vector<double> direction_w2sq(const PointCloud& x) const;

  /// (1/2) sum_l w_l W_2^2; valid on the generalized diagonal as well.
  double energy(const PointCloud& x) const;

  /// Exact gradient of `energy` (p = 2). Throws OnDiagonalError.
  GradientReport gradient(const PointCloud& x) const;

  /// (1/p) sum_l w_l W_p^p through per-cell |.|^p integrals.
  double energy_p(const PointCloud& x, double p) const;

  /// Gradient of `energy_p` for p >= 2. Residuals are filled only for p = 2.
  GradientReport gradient_p(const PointCloud& x, double p) const;

  /// sum_l w_l b_{theta_l, rank_l(i)} theta_l for each particle (row-major).
  std::vector<double> barycentric_map(const PointCloud& x) const;

 private:
  void check(const PointCloud& x) const;

  ProjectedTarget target_;
  DirectionSet dirs_;
  std::size_t n_;
  std::size_t threads_;
  std::vector<CellTable> tables_;
};

double energy(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs);
GradientReport grad_p2(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs);
GradientReport grad_general_p(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs,
                              double p);
double energy_p(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs, double p);

/// F_L = (1/2) sum_l w_l W_2^2 over a user-chosen fixed direction set; the
/// same quantity as `energy`, named for the Monte-Carlo estimator role.
double estimator_fl(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& fixed_dirs);

}  // namespace swflow
