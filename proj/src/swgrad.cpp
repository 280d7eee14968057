#include "swflow/swgrad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "swflow/errors.hpp"
#include "swflow/kernels.hpp"
#include "swflow/ot1d.hpp"
#include "swflow/parallel.hpp"

namespace swflow {

namespace {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double term = v - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
};

// Projection of a cloud (given in SoA) onto one direction, with its ranks.
struct Projection {
  std::vector<double> values;
  std::vector<double> sorted;
  std::vector<std::uint32_t> rank;
};

Projection project_and_rank(const std::vector<const double*>& cols, std::size_t n,
                            std::span<const double> theta) {
  Projection p;
  p.values.resize(n);
  active_kernels().project(cols.data(), theta.size(), n, theta.data(), p.values.data());
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const auto& v = p.values;
  std::sort(order.begin(), order.end(), [&v](std::uint32_t a, std::uint32_t b) {
    return v[a] < v[b] || (v[a] == v[b] && a < b);
  });
  p.rank.resize(n);
  p.sorted.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    p.rank[order[r]] = static_cast<std::uint32_t>(r);
    p.sorted[r] = v[order[r]];
  }
  return p;
}

std::vector<const double*> column_pointers(const std::vector<double>& soa, std::size_t dim, std::size_t n) {
  std::vector<const double*> cols(dim);
  for (std::size_t k = 0; k < dim; ++k) cols[k] = soa.data() + k * n;
  return cols;
}

// Serial, direction-ordered merge of per-direction coefficients c_l[i] into
// acc_i = sum_l w_l c_l[i] theta_l.
std::vector<double> merge_directions(const DirectionSet& dirs, std::size_t n,
                                     const std::vector<double>& coeffs) {
  const std::size_t dim = dirs.dim();
  std::vector<double> acc(dim * n, 0.0);
  std::vector<double*> rows(dim);
  for (std::size_t k = 0; k < dim; ++k) rows[k] = acc.data() + k * n;
  const auto& kern = active_kernels();
  for (std::size_t l = 0; l < dirs.size(); ++l)
    kern.accumulate(rows.data(), dim, n, coeffs.data() + l * n, dirs.weight(l), dirs.direction(l).data());
  return acc;
}

GradientReport make_report(std::size_t n, std::size_t dim, const std::vector<double>& acc_soa, double energy,
                           bool with_residuals, double scale) {
  GradientReport r;
  r.n = n;
  r.dim = dim;
  r.energy = energy;
  r.grads.resize(n * dim);
  if (with_residuals) r.residuals.resize(n * dim);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double a = acc_soa[k * n + i];
      const double g = a * scale;
      r.grads[i * dim + k] = g;
      if (with_residuals) r.residuals[i * dim + k] = a;
      norm2 += g * g;
    }
  }
  r.grad_norm = std::sqrt(norm2);
  return r;
}

}  // namespace

double GradientReport::residual_max_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += residuals[i * dim + k] * residuals[i * dim + k];
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

nlohmann::json GradientReport::to_json() const {
  auto rows = [this](const std::vector<double>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                        v.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)));
    return out;
  };
  nlohmann::json j{{"n", n}, {"dim", dim}, {"energy", energy}, {"grad_norm", grad_norm}, {"grads", rows(grads)}};
  j["residuals"] = residuals.empty() ? nlohmann::json(nullptr) : rows(residuals);
  return j;
}

SlicedEvaluator::SlicedEvaluator(ProjectedTarget target, DirectionSet dirs, std::size_t n, std::size_t threads)
    : target_(std::move(target)), dirs_(std::move(dirs)), n_(n), threads_(threads == 0 ? default_threads() : threads) {
  if (n_ == 0) throw std::invalid_argument("SlicedEvaluator: N must be >= 1");
  if (target_.dim() != dirs_.dim()) throw DimensionMismatch("direction set vs target", target_.dim(), dirs_.dim());
  tables_.resize(dirs_.size());
  parallel_for(dirs_.size(), threads_, [this](std::size_t l) {
    tables_[l] = cell_table(target_, dirs_.direction(l), n_);
    tables_[l].theta_index = l;
  });
}

void SlicedEvaluator::check(const PointCloud& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("point cloud", dim(), x.dim());
  if (x.size() != n_)
    throw std::invalid_argument("SlicedEvaluator: cloud has " + std::to_string(x.size()) +
                                " particles, evaluator built for N = " + std::to_string(n_));
}

std::vector<double> SlicedEvaluator::direction_w2sq(const PointCloud& x) const {
  check(x);
  const auto soa = x.soa();
  const auto cols = column_pointers(soa, dim(), n_);
  std::vector<double> out(dirs_.size());
  const auto& kern = active_kernels();
  parallel_for(dirs_.size(), threads_, [&](std::size_t l) {
    const auto proj = project_and_rank(cols, n_, dirs_.direction(l));
    const auto& t = tables_[l];
    out[l] = (kern.sq_diff_sum(proj.sorted.data(), t.barycenters.data(), n_) + t.variance_sum) /
             static_cast<double>(n_);
  });
  return out;
}

double SlicedEvaluator::energy(const PointCloud& x) const {
  const auto terms = direction_w2sq(x);
  KahanSum s;
  for (std::size_t l = 0; l < terms.size(); ++l) s.add(0.5 * dirs_.weight(l) * terms[l]);
  return s.sum;
}

GradientReport SlicedEvaluator::gradient(const PointCloud& x) const {
  check(x);
  if (const auto hit = x.find_coincident()) throw OnDiagonalError(hit->first, hit->second);
  const auto soa = x.soa();
  const auto cols = column_pointers(soa, dim(), n_);
  const std::size_t count = dirs_.size();
  std::vector<double> coeffs(count * n_);
  std::vector<double> terms(count);
  const auto& kern = active_kernels();
  parallel_for(count, threads_, [&](std::size_t l) {
    const auto proj = project_and_rank(cols, n_, dirs_.direction(l));
    const auto& t = tables_[l];
    terms[l] = (kern.sq_diff_sum(proj.sorted.data(), t.barycenters.data(), n_) + t.variance_sum) /
               static_cast<double>(n_);
    kern.gather_residual(proj.values.data(), t.barycenters.data(), proj.rank.data(), n_, coeffs.data() + l * n_);
  });
  KahanSum e;
  for (std::size_t l = 0; l < count; ++l) e.add(0.5 * dirs_.weight(l) * terms[l]);
  const auto acc = merge_directions(dirs_, n_, coeffs);
  return make_report(n_, dim(), acc, e.sum, true, 1.0 / static_cast<double>(n_));
}

double SlicedEvaluator::energy_p(const PointCloud& x, double p) const {
  check(x);
  if (!(p >= 1.0)) throw std::domain_error("energy_p: p must be >= 1");
  const auto soa = x.soa();
  const auto cols = column_pointers(soa, dim(), n_);
  std::vector<double> terms(dirs_.size());
  parallel_for(dirs_.size(), threads_, [&](std::size_t l) {
    const auto proj = project_and_rank(cols, n_, dirs_.direction(l));
    const auto measure = target_.project(dirs_.direction(l));
    KahanSum s;
    for (std::size_t i = 0; i < n_; ++i) s.add(cell_abs_moment_p(measure, n_, proj.rank[i], proj.values[i], p));
    terms[l] = s.sum;
  });
  KahanSum e;
  for (std::size_t l = 0; l < terms.size(); ++l) e.add(dirs_.weight(l) * terms[l] / p);
  return e.sum;
}

GradientReport SlicedEvaluator::gradient_p(const PointCloud& x, double p) const {
  check(x);
  if (!(p >= 2.0)) throw std::domain_error("gradient_p: p must be >= 2");
  if (const auto hit = x.find_coincident()) throw OnDiagonalError(hit->first, hit->second);
  const auto soa = x.soa();
  const auto cols = column_pointers(soa, dim(), n_);
  const std::size_t count = dirs_.size();
  std::vector<double> coeffs(count * n_);
  parallel_for(count, threads_, [&](std::size_t l) {
    const auto proj = project_and_rank(cols, n_, dirs_.direction(l));
    const auto measure = target_.project(dirs_.direction(l));
    for (std::size_t i = 0; i < n_; ++i)
      coeffs[l * n_ + i] = cell_integral_p(measure, n_, proj.rank[i], proj.values[i], p);
  });
  const auto acc = merge_directions(dirs_, n_, coeffs);
  const bool quadratic = p == 2.0;
  // cell_integral_p already carries the 1/N cell mass; residual = N * grad.
  GradientReport r = make_report(n_, dim(), acc, energy_p(x, p), false, 1.0);
  if (quadratic) {
    r.residuals.resize(r.grads.size());
    for (std::size_t k = 0; k < r.grads.size(); ++k) r.residuals[k] = static_cast<double>(n_) * r.grads[k];
  }
  return r;
}

std::vector<double> SlicedEvaluator::barycentric_map(const PointCloud& x) const {
  check(x);
  const auto soa = x.soa();
  const auto cols = column_pointers(soa, dim(), n_);
  const std::size_t count = dirs_.size();
  std::vector<double> coeffs(count * n_);
  parallel_for(count, threads_, [&](std::size_t l) {
    const auto proj = project_and_rank(cols, n_, dirs_.direction(l));
    for (std::size_t i = 0; i < n_; ++i) coeffs[l * n_ + i] = tables_[l].barycenters[proj.rank[i]];
  });
  const auto acc = merge_directions(dirs_, n_, coeffs);
  std::vector<double> out(n_ * dim());
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < dim(); ++k) out[i * dim() + k] = acc[k * n_ + i];
  return out;
}

double energy(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs) {
  return SlicedEvaluator(target, dirs, x.size()).energy(x);
}

GradientReport grad_p2(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs) {
  return SlicedEvaluator(target, dirs, x.size()).gradient(x);
}

GradientReport grad_general_p(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs,
                              double p) {
  return SlicedEvaluator(target, dirs, x.size()).gradient_p(x, p);
}

double energy_p(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& dirs, double p) {
  return SlicedEvaluator(target, dirs, x.size()).energy_p(x, p);
}

double estimator_fl(const PointCloud& x, const ProjectedTarget& target, const DirectionSet& fixed_dirs) {
  return energy(x, target, fixed_dirs);
}

}  // namespace swflow
