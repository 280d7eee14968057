#include "swflow/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "swflow/errors.hpp"
#include "swflow/io.hpp"
#include "swflow/ot1d.hpp"
#include "swflow/special.hpp"

namespace swflow {

std::string to_string(PerturbationMode m) {
  switch (m) {
    case PerturbationMode::VectorField: return "vector_field";
    case PerturbationMode::SplitTranslation: return "split_translation";
    case PerturbationMode::Kink: return "kink";
  }
  return "unknown";
}

std::size_t PerturbationCurve::zero_index() const {
  for (std::size_t j = 0; j < ts.size(); ++j)
    if (ts[j] == 0.0) return j;
  throw std::invalid_argument("perturbation grid does not contain t = 0");
}

void PerturbationCurve::write_csv(std::ostream& out, const std::string& preamble) const {
  if (!preamble.empty()) out << preamble << '\n';
  out << "t," << value_label() << '\n';
  for (std::size_t j = 0; j < ts.size(); ++j) out << format_double(ts[j]) << ',' << format_double(values[j]) << '\n';
}

std::vector<double> symmetric_grid(std::size_t count, double half_width) {
  if (count < 2) throw std::invalid_argument("symmetric_grid: need at least 2 points");
  if (!(half_width > 0.0)) throw std::invalid_argument("symmetric_grid: half_width must be positive");
  std::vector<double> ts(count);
  const double den = static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    // Mirror the upper half so the grid is exactly symmetric.
    const std::size_t m = count - 1 - j;
    if (2 * j + 1 == count) {
      ts[j] = 0.0;
    } else if (2 * j < count) {
      ts[j] = -half_width * (static_cast<double>(m) - static_cast<double>(j)) / den;
    } else {
      ts[j] = half_width * (static_cast<double>(j) - static_cast<double>(m)) / den;
    }
  }
  return ts;
}

void validate_grid(std::span<const double> ts) {
  if (ts.size() < 2) throw std::invalid_argument("perturbation grid needs at least 2 points");
  for (std::size_t j = 1; j < ts.size(); ++j)
    if (!(ts[j] > ts[j - 1])) throw std::invalid_argument("perturbation grid must be strictly increasing");
  const double scale = std::max(std::abs(ts.front()), std::abs(ts.back()));
  for (std::size_t j = 0; j < ts.size(); ++j)
    if (std::abs(ts[j] + ts[ts.size() - 1 - j]) > 1e-12 * scale)
      throw std::invalid_argument("perturbation grid must be symmetric about 0");
}

PointCloud segment_critical_cloud(std::size_t n) {
  if (n < 2) throw std::invalid_argument("segment_critical_cloud: N must be >= 2");
  const double lo = -4.0 / std::numbers::pi;
  const double span = 8.0 / std::numbers::pi;
  std::vector<double> c(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    c[2 * i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
  return PointCloud(2, std::move(c));
}

double alpha_d(const DirectionSet& dirs) {
  double s = 0.0;
  for (std::size_t l = 0; l < dirs.size(); ++l) s += dirs.weight(l) * std::abs(dirs.direction(l)[0]);
  return static_cast<double>(dirs.dim()) * s;
}

PointCloud gaussian_line_critical_cloud(std::size_t n, std::size_t dim, const DirectionSet& dirs) {
  if (n < 1) throw std::invalid_argument("gaussian_line_critical_cloud: N must be >= 1");
  if (dim < 2) throw std::invalid_argument("gaussian_line_critical_cloud: dim must be >= 2");
  if (dirs.dim() != dim) throw DimensionMismatch("direction set", dim, dirs.dim());
  const double alpha = alpha_d(dirs);
  std::vector<double> c(dim * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double level = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    c[dim * i] = 2 * i + 1 == n ? 0.0 : alpha * normal_quantile(level);
  }
  return PointCloud(dim, std::move(c));
}

Dumbbell dumbbell_cloud(std::size_t segment_points, std::size_t ring_points) {
  if (segment_points < 2 || ring_points < 1) throw std::invalid_argument("dumbbell_cloud: too few points");
  Dumbbell db;
  std::vector<double> c;
  for (std::size_t i = 0; i < segment_points; ++i) {
    c.push_back(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(segment_points - 1));
    c.push_back(0.0);
    db.on_segment.push_back(true);
  }
  for (double cx : {-1.5, 1.5}) {
    for (std::size_t j = 0; j < ring_points; ++j) {
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(ring_points);
      c.push_back(cx + 0.4 * std::cos(a));
      c.push_back(0.4 * std::sin(a));
      db.on_segment.push_back(false);
    }
  }
  db.cloud = PointCloud(2, std::move(c));
  return db;
}

std::vector<double> alternating_field(std::size_t n, std::size_t dim, const std::vector<bool>& mask) {
  if (dim < 2) throw std::invalid_argument("alternating_field: dim must be >= 2");
  if (!mask.empty() && mask.size() != n) throw std::invalid_argument("alternating_field: mask length mismatch");
  std::vector<double> xi(n * dim, 0.0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    xi[i * dim + 1] = j % 2 == 0 ? 1.0 : -1.0;
    ++j;
  }
  return xi;
}

namespace {

PointCloud displaced(const PointCloud& x, std::span<const double> xi, double t) {
  PointCloud y = x;
  auto& c = y.coords();
  for (std::size_t j = 0; j < c.size(); ++j) c[j] += t * xi[j];
  return y;
}

void check_field(const PointCloud& x, std::span<const double> xi) {
  if (xi.size() != x.coords().size())
    throw std::invalid_argument("perturbation field has " + std::to_string(xi.size()) + " entries, cloud has " +
                                std::to_string(x.coords().size()));
}

nlohmann::json curve_metadata(const SlicedEvaluator& eval, std::size_t n) {
  return {{"target", eval.target().kind_name()},
          {"N", n},
          {"L", eval.directions().size()},
          {"directions", eval.directions().kind() == DirectionSet::Kind::Equispaced ? "equispaced"
                         : eval.directions().kind() == DirectionSet::Kind::Sampled  ? "sampled"
                                                                                   : "explicit"},
          {"phase_or_seed", eval.directions().phase_or_seed()}};
}

}  // namespace

PerturbationCurve perturb_vector_field(const PointCloud& x, std::span<const double> xi, std::span<const double> ts,
                                       const SlicedEvaluator& eval) {
  check_field(x, xi);
  validate_grid(ts);
  PerturbationCurve curve;
  curve.mode = PerturbationMode::VectorField;
  curve.ts.assign(ts.begin(), ts.end());
  curve.values.reserve(ts.size());
  for (double t : ts) curve.values.push_back(2.0 * eval.energy(displaced(x, xi, t)));
  curve.metadata = curve_metadata(eval, x.size());
  return curve;
}

bool local_max_at_zero(const PointCloud& x, std::span<const double> xi, std::span<const double> deltas,
                       const SlicedEvaluator& eval) {
  check_field(x, xi);
  const double center = eval.energy(x);
  for (double d : deltas) {
    if (!(eval.energy(displaced(x, xi, d)) < center)) return false;
    if (!(eval.energy(displaced(x, xi, -d)) < center)) return false;
  }
  return true;
}

PointCloud split_translation_cloud(const PointCloud& x, std::span<const double> n_hat, double t) {
  if (n_hat.size() != x.dim()) throw DimensionMismatch("split translation normal", x.dim(), n_hat.size());
  const std::size_t n = x.size(), d = x.dim();
  std::vector<double> c(2 * n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double v = x.coords()[i * d + k];
      c[i * d + k] = v - t * n_hat[k];
      c[(n + i) * d + k] = v + t * n_hat[k];
    }
  return PointCloud(d, std::move(c));
}

PerturbationCurve perturb_split_translation(const PointCloud& x, std::span<const double> n_hat,
                                            std::span<const double> ts, const SlicedEvaluator& eval) {
  if (x.dim() != 2) throw std::invalid_argument("split-translation probe is defined for planar clouds only");
  if (eval.n() != 2 * x.size()) throw std::invalid_argument("split-translation evaluator must be built for 2N");
  validate_grid(ts);
  PerturbationCurve curve;
  curve.mode = PerturbationMode::SplitTranslation;
  curve.ts.assign(ts.begin(), ts.end());
  for (double t : ts) curve.values.push_back(2.0 * eval.energy(split_translation_cloud(x, n_hat, t)));
  curve.metadata = curve_metadata(eval, x.size());
  return curve;
}

PerturbationCurve perturb_split_translation(const PointCloud& x, std::span<const double> n_hat,
                                            std::span<const double> ts, const ProjectedTarget& target,
                                            const DirectionSet& dirs) {
  if (x.dim() != 2) throw std::invalid_argument("split-translation probe is defined for planar clouds only");
  return perturb_split_translation(x, n_hat, ts, SlicedEvaluator(target, dirs, 2 * x.size()));
}

double instability_envelope_radius(const PerturbationCurve& curve, double c) {
  const std::size_t z = curve.zero_index();
  const double v0 = curve.values[z];
  double radius = 0.0;
  for (std::size_t step = 1; z >= step && z + step < curve.ts.size(); ++step) {
    const double tl = curve.ts[z - step], tr = curve.ts[z + step];
    const bool left = curve.values[z - step] <= v0 - c * tl * tl;
    const bool right = curve.values[z + step] <= v0 - c * tr * tr;
    if (!left || !right) break;
    radius = std::min(-tl, tr);
  }
  return radius;
}

double CellDescriptor::evaluate_q(const PointCloud& y) const {
  if (y.size() != n || y.dim() != dim) throw std::invalid_argument("CellDescriptor::evaluate_q: shape mismatch");
  double s = quadratic_constant;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = y.point(i);
    for (std::size_t a = 0; a < dim; ++a) {
      double ap = 0.0;
      for (std::size_t b = 0; b < dim; ++b) ap += hessian_block[a * dim + b] * p[b];
      s += 0.5 * p[a] * ap + linear_terms[i * dim + a] * p[a];
    }
  }
  return s;
}

nlohmann::json CellDescriptor::to_json() const {
  return {{"n", n},
          {"dim", dim},
          {"sigma", sigma},
          {"hessian_block", hessian_block},
          {"hessian_eigenvalues", direction_moment_eigenvalues},
          {"c0", c0},
          {"quadratic_constant", quadratic_constant},
          {"hessian_psd", hessian_psd},
          {"strictly_convex", strictly_convex}};
}

CellDescriptor analyze_cell(const PointCloud& x, const SlicedEvaluator& eval) {
  if (x.size() != eval.n()) throw std::invalid_argument("analyze_cell: evaluator size mismatch");
  if (x.dim() != eval.dim()) throw DimensionMismatch("analyze_cell", eval.dim(), x.dim());
  const auto& dirs = eval.directions();
  const std::size_t n = x.size(), d = x.dim(), count = dirs.size();
  const double dn = static_cast<double>(n);

  CellDescriptor cd;
  cd.n = n;
  cd.dim = d;
  cd.linear_terms.assign(n * d, 0.0);
  std::vector<double> proj(n);
  for (std::size_t l = 0; l < count; ++l) {
    const auto th = dirs.direction(l);
    const double w = dirs.weight(l);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += x.coords()[i * d + k] * th[k];
      proj[i] = s;
    }
    auto sp = sort_projection(proj);
    for (std::size_t r = 1; r < n; ++r)
      if (proj[sp.perm[r]] == proj[sp.perm[r - 1]]) throw TieInDirectionError(l);
    const auto& table = eval.table(l);
    double bsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double b = table.barycenters[sp.inverse[i]];
      for (std::size_t k = 0; k < d; ++k) cd.linear_terms[i * d + k] -= w * b * th[k] / dn;
      bsq += table.barycenters[i] * table.barycenters[i];
    }
    cd.quadratic_constant += 0.5 * w * bsq / dn;
    cd.c0 += 0.5 * w * table.variance_sum / dn;
    cd.sigma.push_back(std::move(sp.perm));
  }

  const auto moment = dirs.second_moment();
  cd.hessian_block.resize(d * d);
  for (std::size_t j = 0; j < d * d; ++j) cd.hessian_block[j] = moment[j] / dn;

  Eigen::MatrixXd m(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = moment[a * d + b];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  cd.direction_moment_eigenvalues.assign(ev.data(), ev.data() + ev.size());
  const double lo = cd.direction_moment_eigenvalues.front();
  cd.hessian_psd = lo >= -1e-12;
  cd.strictly_convex = lo > 1e-12;
  return cd;
}

KinkScan kink_scan(const PointCloud& x, std::span<const double> xi, std::span<const double> ts,
                   const SlicedEvaluator& eval) {
  check_field(x, xi);
  validate_grid(ts);
  KinkScan out;
  auto& curve = out.curve;
  curve.mode = PerturbationMode::Kink;
  curve.ts.assign(ts.begin(), ts.end());
  const std::size_t z = curve.zero_index();
  if (z == 0 || z + 1 == ts.size()) throw std::invalid_argument("kink scan needs grid points on both sides of 0");
  for (double t : ts) curve.values.push_back(eval.energy(displaced(x, xi, t)));
  curve.metadata = curve_metadata(eval, x.size());
  const double right = (curve.values[z + 1] - curve.values[z]) / curve.ts[z + 1];
  const double left = (curve.values[z] - curve.values[z - 1]) / (-curve.ts[z - 1]);
  out.slope_jump = right - left;
  return out;
}

}  // namespace swflow
