#include "swflow/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "swflow/io.hpp"
#include "swflow/kernels.hpp"

namespace swflow {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw std::invalid_argument("PointCloud: dim must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0)
    throw std::invalid_argument("PointCloud: need a positive multiple of dim coordinates");
}

std::vector<double> PointCloud::soa() const {
  const std::size_t n = size();
  std::vector<double> out(coords_.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim_; ++k) out[k * n + i] = coords_[i * dim_ + k];
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> PointCloud::find_coincident() const {
  const std::size_t n = size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = point(a), pb = point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t r = 1; r < n; ++r) {
    const auto pa = point(order[r - 1]), pb = point(order[r]);
    if (std::equal(pa.begin(), pa.end(), pb.begin()))
      return std::make_pair(std::min(order[r - 1], order[r]), std::max(order[r - 1], order[r]));
  }
  return std::nullopt;
}

double PointCloud::min_separation() const {
  const std::size_t n = size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  const auto cols = soa();
  std::vector<const double*> ptrs(dim_);
  for (std::size_t k = 0; k < dim_; ++k) ptrs[k] = cols.data() + k * n;
  const auto& kern = active_kernels();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    best = std::min(best, kern.min_sq_dist(ptrs.data(), dim_, n, coords_.data() + i * dim_, i + 1));
  }
  return std::sqrt(best);
}

PointCloud PointCloud::concat(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("PointCloud::concat: dimension mismatch");
  std::vector<double> c = a.coords();
  c.insert(c.end(), b.coords().begin(), b.coords().end());
  return PointCloud(a.dim(), std::move(c));
}

PointCloud load_cloud_csv(const std::string& path, std::size_t dim) {
  const auto rows = read_csv_rows(path);
  std::vector<double> coords;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim)
      throw std::invalid_argument(path + ": row " + std::to_string(r + 1) + " has " +
                                  std::to_string(rows[r].size()) + " columns, expected " +
                                  std::to_string(dim));
    coords.insert(coords.end(), rows[r].begin(), rows[r].end());
  }
  if (coords.empty()) throw std::invalid_argument(path + ": no points");
  return PointCloud(dim, std::move(coords));
}

void save_cloud_csv(const PointCloud& cloud, const std::string& path, const std::string& preamble) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  if (!preamble.empty()) out << preamble << '\n';
  for (std::size_t k = 0; k < cloud.dim(); ++k) out << (k ? ",x" : "x") << k;
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    write_csv_row(out, std::vector<double>(p.begin(), p.end()));
  }
}

}  // namespace swflow
