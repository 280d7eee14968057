#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace swflow {

/// A finite quadrature of the uniform probability measure on S^{d-1}.
///
/// Directions are stored row-major (L rows of `dim` doubles) in a fixed index
/// order; every downstream reduction walks them in that order.
class DirectionSet {
 public:
  enum class Kind { Equispaced, Sampled, Explicit };

  DirectionSet(std::size_t dim, std::vector<double> dirs, std::vector<double> weights,
               Kind kind = Kind::Explicit, double phase_or_seed = 0.0);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }

  std::span<const double> direction(std::size_t l) const {
    return {dirs_.data() + l * dim_, dim_};
  }
  double weight(std::size_t l) const { return weights_[l]; }

  const std::vector<double>& raw_directions() const { return dirs_; }
  const std::vector<double>& weights() const { return weights_; }

  Kind kind() const { return kind_; }
  double phase_or_seed() const { return phase_or_seed_; }

  /// Sum_l w_l theta_l theta_l^T, row-major dim x dim.
  std::vector<double> second_moment() const;

  nlohmann::json to_json() const;
  static DirectionSet from_json(const nlohmann::json& j);

 private:
  std::size_t dim_;
  std::vector<double> dirs_;
  std::vector<double> weights_;
  Kind kind_;
  double phase_or_seed_;
};

/// L directions at angles phase + 2 pi k / L in the plane, uniform weights.
/// Angles that land on a quarter turn produce exact axis vectors.
DirectionSet equispaced_circle(std::size_t count, double phase);

/// L i.i.d. uniform directions (normalized Gaussian vectors) from a seeded
/// 64-bit Mersenne twister.
DirectionSet sampled_sphere(std::size_t dim, std::size_t count, std::uint64_t seed);

}  // namespace swflow
