#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "swflow/measure1d.hpp"

namespace swflow {

// Planar density (1/2 pi r)(r^2 - |x|^2)^{-1/2} on the disk of radius r; every
// 1D projection is uniform on [-r, r].
struct SlicedUniformDisk {
  double radius = 1.0;
};

// N(0, sigma^2 I_d).
struct IsotropicGaussian {
  std::size_t dim = 2;
  double sigma = 1.0;
};

// Weighted point cloud; points row-major, weights normalized to sum 1.
struct EmpiricalCloud {
  std::size_t dim = 2;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

// Uniform measure on the segment [p, q].
struct LineSegmentUniform {
  std::vector<double> p;
  std::vector<double> q;
};

/// Target measure rho, queried through its 1D projections rho_theta.
class ProjectedTarget {
 public:
  using Variant = std::variant<SlicedUniformDisk, IsotropicGaussian, EmpiricalCloud, LineSegmentUniform>;

  ProjectedTarget(SlicedUniformDisk t);
  ProjectedTarget(IsotropicGaussian t);
  ProjectedTarget(EmpiricalCloud t);
  ProjectedTarget(LineSegmentUniform t);

  std::size_t dim() const { return dim_; }
  std::string kind_name() const;
  const Variant& variant() const { return target_; }

  /// The law of <x, theta> for x ~ rho.
  Measure1D project(std::span<const double> theta) const;

  /// Uniform bound on the projected densities, absent when some projection
  /// has atoms or unbounded density.
  std::optional<double> density_bound() const;

 private:
  Variant target_;
  std::size_t dim_;
};

double quantile(const ProjectedTarget& target, std::span<const double> theta, double t);
CellTable cell_table(const ProjectedTarget& target, std::span<const double> theta, std::size_t n);
std::optional<double> density_bound(const ProjectedTarget& target);
/// Cell index i is 0-based here (cell i covers quantile levels [i/N, (i+1)/N]).
double cell_integral_p(const ProjectedTarget& target, std::span<const double> theta, std::size_t n,
                       std::size_t i, double a, double p);

EmpiricalCloud make_empirical(std::size_t dim, std::vector<double> points,
                              std::vector<double> weights = {});

/// Uniform samples on the planar annulus r_in <= |x| <= r_out by rejection
/// from the bounding square.
EmpiricalCloud sample_shell(double r_in, double r_out, std::size_t count, std::uint64_t seed);

/// CSV with `dim` coordinate columns and an optional trailing weight column.
EmpiricalCloud load_empirical_csv(const std::string& path, std::size_t dim);

/// {"kind": "sliced_uniform_disk" | "gaussian" | "empirical" | "segment", ...}
ProjectedTarget target_from_json(const nlohmann::json& spec, std::size_t dim);

}  // namespace swflow
