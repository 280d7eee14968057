#include "swflow/targets.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "swflow/errors.hpp"
#include "swflow/io.hpp"

namespace swflow {

namespace {

void check_theta(const ProjectedTarget& t, std::span<const double> theta) {
  if (theta.size() != t.dim()) throw DimensionMismatch("direction", t.dim(), theta.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

ProjectedTarget::ProjectedTarget(SlicedUniformDisk t) : target_(t), dim_(2) {
  if (!(t.radius > 0.0)) throw std::invalid_argument("SlicedUniformDisk: radius must be positive");
}

ProjectedTarget::ProjectedTarget(IsotropicGaussian t) : target_(t), dim_(t.dim) {
  if (t.dim < 1) throw std::invalid_argument("IsotropicGaussian: dim must be >= 1");
  if (!(t.sigma > 0.0)) throw std::invalid_argument("IsotropicGaussian: sigma must be positive");
}

ProjectedTarget::ProjectedTarget(EmpiricalCloud t) : target_(std::move(t)), dim_(0) {
  const auto& e = std::get<EmpiricalCloud>(target_);
  dim_ = e.dim;
  if (e.weights.empty()) throw std::invalid_argument("EmpiricalCloud: no support points");
  if (e.points.size() != e.dim * e.weights.size())
    throw std::invalid_argument("EmpiricalCloud: points/weights size mismatch");
}

ProjectedTarget::ProjectedTarget(LineSegmentUniform t) : target_(std::move(t)), dim_(0) {
  const auto& s = std::get<LineSegmentUniform>(target_);
  if (s.p.size() != s.q.size() || s.p.empty())
    throw std::invalid_argument("LineSegmentUniform: endpoints must have equal nonzero dimension");
  dim_ = s.p.size();
}

std::string ProjectedTarget::kind_name() const {
  switch (target_.index()) {
    case 0: return "sliced_uniform_disk";
    case 1: return "gaussian";
    case 2: return "empirical";
    default: return "segment";
  }
}

Measure1D ProjectedTarget::project(std::span<const double> theta) const {
  check_theta(*this, theta);
  if (const auto* d = std::get_if<SlicedUniformDisk>(&target_))
    return UniformInterval{-d->radius, d->radius};
  if (const auto* g = std::get_if<IsotropicGaussian>(&target_)) {
    const double norm = std::sqrt(dot(theta, theta));
    return Normal1D{0.0, g->sigma * norm};
  }
  if (const auto* e = std::get_if<EmpiricalCloud>(&target_)) {
    std::vector<double> proj(e->size());
    for (std::size_t j = 0; j < e->size(); ++j)
      proj[j] = dot({e->points.data() + j * e->dim, e->dim}, theta);
    return Atomic1D::from_unsorted(std::move(proj), e->weights);
  }
  const auto& s = std::get<LineSegmentUniform>(target_);
  double a = dot(s.p, theta);
  double b = dot(s.q, theta);
  if (a > b) std::swap(a, b);
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (b - a <= 1e-14 * scale) return Atomic1D::from_unsorted({0.5 * (a + b)}, {1.0});
  return UniformInterval{a, b};
}

std::optional<double> ProjectedTarget::density_bound() const {
  if (const auto* d = std::get_if<SlicedUniformDisk>(&target_)) return 1.0 / (2.0 * d->radius);
  if (const auto* g = std::get_if<IsotropicGaussian>(&target_))
    return 1.0 / (g->sigma * std::sqrt(2.0 * std::numbers::pi));
  return std::nullopt;
}

double quantile(const ProjectedTarget& target, std::span<const double> theta, double t) {
  return quantile(target.project(theta), t);
}

CellTable cell_table(const ProjectedTarget& target, std::span<const double> theta, std::size_t n) {
  return cell_table(target.project(theta), n);
}

std::optional<double> density_bound(const ProjectedTarget& target) { return target.density_bound(); }

double cell_integral_p(const ProjectedTarget& target, std::span<const double> theta, std::size_t n,
                       std::size_t i, double a, double p) {
  return cell_integral_p(target.project(theta), n, i, a, p);
}

EmpiricalCloud make_empirical(std::size_t dim, std::vector<double> points,
                              std::vector<double> weights) {
  if (dim == 0 || points.size() % dim != 0)
    throw std::invalid_argument("make_empirical: coordinate count not a multiple of dim");
  const std::size_t m = points.size() / dim;
  if (m == 0) throw std::invalid_argument("make_empirical: no support points");
  if (weights.empty()) weights.assign(m, 1.0 / static_cast<double>(m));
  if (weights.size() != m) throw std::invalid_argument("make_empirical: weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("make_empirical: weights must be positive");
    total += w;
  }
  for (double& w : weights) w /= total;
  return EmpiricalCloud{dim, std::move(points), std::move(weights)};
}

EmpiricalCloud sample_shell(double r_in, double r_out, std::size_t count, std::uint64_t seed) {
  if (!(r_in >= 0.0 && r_out > r_in)) throw std::invalid_argument("sample_shell: need 0 <= r_in < r_out");
  if (count == 0) throw std::invalid_argument("sample_shell: M must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-r_out, r_out);
  std::vector<double> pts;
  pts.reserve(2 * count);
  while (pts.size() < 2 * count) {
    const double x = box(rng);
    const double y = box(rng);
    const double r2 = x * x + y * y;
    if (r2 >= r_in * r_in && r2 <= r_out * r_out) {
      pts.push_back(x);
      pts.push_back(y);
    }
  }
  return make_empirical(2, std::move(pts));
}

EmpiricalCloud load_empirical_csv(const std::string& path, std::size_t dim) {
  const auto rows = read_csv_rows(path);
  std::vector<double> pts;
  std::vector<double> weights;
  bool weighted = false;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != dim && row.size() != dim + 1)
      throw std::invalid_argument(path + ": row " + std::to_string(r + 1) + " has " +
                                  std::to_string(row.size()) + " columns, expected " +
                                  std::to_string(dim) + " or " + std::to_string(dim + 1));
    if (r == 0) weighted = row.size() == dim + 1;
    if (weighted != (row.size() == dim + 1))
      throw std::invalid_argument(path + ": inconsistent weight column");
    pts.insert(pts.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(dim));
    if (weighted) weights.push_back(row[dim]);
  }
  return make_empirical(dim, std::move(pts), std::move(weights));
}

ProjectedTarget target_from_json(const nlohmann::json& spec, std::size_t dim) {
  const auto kind = spec.at("kind").get<std::string>();
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : spec.items()) {
      bool ok = key == "kind";
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw std::invalid_argument("target spec: unknown field '" + key + "'");
    }
  };
  if (kind == "sliced_uniform_disk") {
    reject_unknown({"radius"});
    if (dim != 2) throw std::invalid_argument("sliced_uniform_disk is planar (dim = 2)");
    return SlicedUniformDisk{spec.value("radius", 1.0)};
  }
  if (kind == "gaussian") {
    reject_unknown({"sigma"});
    return IsotropicGaussian{dim, spec.value("sigma", 1.0)};
  }
  if (kind == "segment") {
    reject_unknown({"p", "q"});
    LineSegmentUniform s{spec.at("p").get<std::vector<double>>(), spec.at("q").get<std::vector<double>>()};
    if (s.p.size() != dim) throw DimensionMismatch("segment target", dim, s.p.size());
    return s;
  }
  if (kind == "empirical") {
    if (spec.contains("sampler")) {
      reject_unknown({"sampler", "r_in", "r_out", "M", "seed"});
      const auto sampler = spec.at("sampler").get<std::string>();
      if (sampler != "shell") throw std::invalid_argument("unknown empirical sampler '" + sampler + "'");
      if (dim != 2) throw std::invalid_argument("shell sampler is planar (dim = 2)");
      return sample_shell(spec.value("r_in", 1.0), spec.value("r_out", 2.0),
                          spec.value("M", std::size_t{10000}), spec.value("seed", std::uint64_t{0}));
    }
    reject_unknown({"path"});
    return load_empirical_csv(spec.at("path").get<std::string>(), dim);
  }
  throw std::invalid_argument("unknown target kind '" + kind + "'");
}

}  // namespace swflow
