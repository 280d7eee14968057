#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace swflow {

/// N particles in R^d, stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  const std::vector<double>& coords() const { return coords_; }
  std::vector<double>& coords() { return coords_; }

  /// Coordinates transposed to structure-of-arrays: dim blocks of N values.
  std::vector<double> soa() const;

  /// A pair of coincident particles, if any (exact equality).
  std::optional<std::pair<std::size_t, std::size_t>> find_coincident() const;
  bool off_diagonal() const { return !find_coincident().has_value(); }

  /// min_{i != j} |X_i - X_j|; +inf for a single particle.
  double min_separation() const;

  /// Concatenation of two clouds with equal dimension.
  static PointCloud concat(const PointCloud& a, const PointCloud& b);

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

PointCloud load_cloud_csv(const std::string& path, std::size_t dim);
void save_cloud_csv(const PointCloud& cloud, const std::string& path, const std::string& preamble);

}  // namespace swflow
