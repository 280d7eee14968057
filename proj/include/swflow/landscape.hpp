#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "swflow/directions.hpp"
#include "swflow/point_cloud.hpp"
#include "swflow/swgrad.hpp"
#include "swflow/targets.hpp"

namespace swflow {

enum class PerturbationMode { VectorField, SplitTranslation, Kink };
std::string to_string(PerturbationMode m);

/// Energy along a one-parameter perturbation. Vector-field and
/// split-translation curves report SW_2^2 (= 2F); kink curves report the
/// estimator F_L itself.
struct PerturbationCurve {
  std::vector<double> ts;
  std::vector<double> values;
  PerturbationMode mode = PerturbationMode::VectorField;
  nlohmann::json metadata = nlohmann::json::object();

  std::string value_label() const { return mode == PerturbationMode::Kink ? "F_L" : "SW2^2"; }
  /// Index of t = 0 in ts; throws if absent.
  std::size_t zero_index() const;
  void write_csv(std::ostream& out, const std::string& preamble) const;
};

/// `count` points evenly spaced on [-half_width, half_width].
std::vector<double> symmetric_grid(std::size_t count, double half_width);

/// Throws std::invalid_argument unless ts is strictly increasing and
/// symmetric about 0 (to 1e-12 relative).
void validate_grid(std::span<const double> ts);

/// Piecewise-quadratic structure of F_L around a cloud with untied
/// projections: F_L(Y) = q(Y) + c0 for Y in the same permutation cell, with
/// q(Y) = sum_i [ 1/2 Y_i^T A Y_i + <lin_i, Y_i> ] + quadratic_constant.
struct CellDescriptor {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<std::vector<std::size_t>> sigma;  // per direction, 0-based sorting permutation
  std::vector<double> hessian_block;            // A = (1/N) sum_l w_l theta_l theta_l^T, row-major
  std::vector<double> direction_moment_eigenvalues;  // of sum_l w_l theta_l theta_l^T, ascending
  std::vector<double> linear_terms;             // lin_i = -(1/N) sum_l w_l b_{l, rank_l(i)} theta_l
  double quadratic_constant = 0.0;              // (1/2N) sum_l w_l sum_i b_{l,i}^2
  double c0 = 0.0;                              // (1/2) sum_l w_l (1/N) sum_i within-cell variance
  bool hessian_psd = false;
  bool strictly_convex = false;

  double evaluate_q(const PointCloud& y) const;
  nlohmann::json to_json() const;
};

PointCloud segment_critical_cloud(std::size_t n);

/// alpha_d = d sum_l w_l |<theta_l, e_1>|.
double alpha_d(const DirectionSet& dirs);

/// (alpha_d Phi^{-1}((i - 1/2)/N), 0, ..., 0).
PointCloud gaussian_line_critical_cloud(std::size_t n, std::size_t dim, const DirectionSet& dirs);

/// A horizontal segment of `segment_points` points on [-1, 1] x {0} joined to
/// two rings of `ring_points` points (radius 0.4, centered at (+-1.5, 0)).
/// `on_segment[i]` marks the segment particles.
struct Dumbbell {
  PointCloud cloud;
  std::vector<bool> on_segment;
};
Dumbbell dumbbell_cloud(std::size_t segment_points = 50, std::size_t ring_points = 25);

/// xi_i = (-1)^j e_2 on the selected particles (j counts selected particles
/// from 0), zero elsewhere. An empty mask selects every particle.
std::vector<double> alternating_field(std::size_t n, std::size_t dim, const std::vector<bool>& mask = {});

/// values[j] = SW_2^2(X + ts[j] xi) = 2 energy.
PerturbationCurve perturb_vector_field(const PointCloud& x, std::span<const double> xi, std::span<const double> ts,
                                       const SlicedEvaluator& eval);

/// SW_2^2(X + t xi) < SW_2^2(X) at t = +-delta for every delta.
bool local_max_at_zero(const PointCloud& x, std::span<const double> xi, std::span<const double> deltas,
                       const SlicedEvaluator& eval);

/// The measure (1/2)(tau_{-t n} mu + tau_{t n} mu) as a 2N-point cloud.
PointCloud split_translation_cloud(const PointCloud& x, std::span<const double> n_hat, double t);

/// values[j] = SW_2^2 of the split translation at ts[j]; eval must be built
/// for 2N particles. Planar clouds only.
PerturbationCurve perturb_split_translation(const PointCloud& x, std::span<const double> n_hat,
                                            std::span<const double> ts, const SlicedEvaluator& eval);
PerturbationCurve perturb_split_translation(const PointCloud& x, std::span<const double> n_hat,
                                            std::span<const double> ts, const ProjectedTarget& target,
                                            const DirectionSet& dirs);

/// Largest grid radius r such that value(t) <= value(0) - c t^2 for every
/// grid t with 0 < |t| <= r; 0 when the nearest points already fail.
double instability_envelope_radius(const PerturbationCurve& curve, double c);

/// Throws TieInDirectionError when some direction has tied projections.
CellDescriptor analyze_cell(const PointCloud& x, const SlicedEvaluator& eval);

struct KinkScan {
  PerturbationCurve curve;
  double slope_jump = 0.0;  // right slope minus left slope at t = 0
};

/// F_L(X + t xi) on the grid; slopes from one-sided differences at the grid
/// points adjacent to t = 0.
KinkScan kink_scan(const PointCloud& x, std::span<const double> xi, std::span<const double> ts,
                   const SlicedEvaluator& eval);

}  // namespace swflow
