#include "swflow/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "swflow/io.hpp"
#include "swflow/special.hpp"

namespace swflow {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Diverged: return "diverged";
  }
  return "unknown";
}

namespace {

bool second_moment_is_isotropic(const DirectionSet& dirs) {
  const std::size_t d = dirs.dim();
  const auto m = dirs.second_moment();
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const double want = a == b ? 1.0 / static_cast<double>(d) : 0.0;
      if (std::abs(m[a * d + b] - want) > 1e-12) return false;
    }
  return true;
}

}  // namespace

void DescentTrace::write_csv(std::ostream& out, const std::string& preamble) const {
  if (!preamble.empty()) out << preamble << '\n';
  out << "k,energy,grad_norm,min_sep,lemma_slack\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.energy) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.min_sep) << ',' << format_double(r.lemma_slack) << '\n';
  }
}

DescentResult run_descent(const PointCloud& x0, const SlicedEvaluator& eval, const DescentConfig& cfg) {
  if (!(cfg.step_multiple > 0.0)) throw std::invalid_argument("run_descent: step_multiple must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("run_descent: max_iters must be >= 1");
  const std::size_t n = x0.size();
  const std::size_t d = x0.dim();
  const double lambda = cfg.step(n);
  const double tol = cfg.tolerance(n);
  const double guarantee = lambda * (1.0 - lambda / (2.0 * static_cast<double>(n * d)));
  const bool check_barycentric =
      lambda == static_cast<double>(n * d) && second_moment_is_isotropic(eval.directions());

  DescentTrace trace;
  trace.step = lambda;
  trace.barycentric_update_deviation = check_barycentric ? 0.0 : std::numeric_limits<double>::quiet_NaN();

  PointCloud x = x0;
  GradientReport report = eval.gradient(x);
  const double initial_energy = report.energy;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t k = 0;; ++k) {
    TraceRow row{k, report.energy, report.grad_norm, x.min_separation(), nan};
    if (report.grad_norm <= tol) {
      trace.rows.push_back(row);
      trace.stop = StopReason::Converged;
      break;
    }
    if (k == cfg.max_iters) {
      trace.rows.push_back(row);
      trace.stop = StopReason::MaxIters;
      break;
    }

    PointCloud y = x;
    auto& yc = y.coords();
    for (std::size_t j = 0; j < yc.size(); ++j) yc[j] -= lambda * report.grads[j];

    if (check_barycentric) {
      const auto target = eval.barycentric_map(x);
      double dev = 0.0;
      for (std::size_t j = 0; j < yc.size(); ++j)
        dev = std::max(dev, std::abs(yc[j] - static_cast<double>(d) * target[j]));
      trace.barycentric_update_deviation = std::max(trace.barycentric_update_deviation, dev);
    }

    GradientReport next = eval.gradient(y);
    row.lemma_slack = next.energy - report.energy + guarantee * report.grad_norm * report.grad_norm;
    trace.rows.push_back(row);
    x = std::move(y);
    report = std::move(next);

    if (!(report.energy <= cfg.divergence_factor * initial_energy)) {
      trace.rows.push_back({k + 1, report.energy, report.grad_norm, x.min_separation(), nan});
      trace.stop = StopReason::Diverged;
      break;
    }
  }
  return {std::move(x), std::move(trace), std::move(report)};
}

DescentResult run_descent(const PointCloud& x0, const ProjectedTarget& target, const DirectionSet& dirs,
                          const DescentConfig& cfg) {
  return run_descent(x0, SlicedEvaluator(target, dirs, x0.size()), cfg);
}

PointCloud uniform_box_cloud(std::size_t n, std::size_t dim, double lo, double hi, std::uint64_t seed) {
  if (n == 0 || dim == 0) throw std::invalid_argument("uniform_box_cloud: need n, dim >= 1");
  if (!(hi > lo)) throw std::invalid_argument("uniform_box_cloud: need lo < hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(n * dim);
  for (double& v : c) v = u(rng);
  return PointCloud(dim, std::move(c));
}

double separation_constant(std::size_t dim) { return sphere_abs_moment(static_cast<int>(dim)); }

SeparationCheck check_separation_bound(const PointCloud& x, const ProjectedTarget& target) {
  SeparationCheck out;
  out.min_separation = x.min_separation();
  const auto beta = target.density_bound();
  if (!beta) return out;
  const double d = static_cast<double>(x.dim());
  out.bound = d * separation_constant(x.dim()) / (static_cast<double>(x.size()) * *beta);
  out.satisfied = out.min_separation >= *out.bound - 1e-9;
  return out;
}

SweepTable step_size_sweep(const PointCloud& x0, const SlicedEvaluator& eval, const std::vector<double>& multiples,
                           std::size_t iters) {
  SweepTable table;
  table.multiples = multiples;
  for (double m : multiples) {
    DescentConfig cfg;
    cfg.step_multiple = m;
    cfg.max_iters = iters;
    table.traces.push_back(run_descent(x0, eval, cfg).trace);
  }
  return table;
}

void SweepTable::write_csv(std::ostream& out, const std::string& preamble) const {
  if (!preamble.empty()) out << preamble << '\n';
  out << 'k';
  for (double m : multiples) out << ",energy_step_" << format_double(m) << "N";
  out << '\n';
  std::size_t rows = 0;
  for (const auto& t : traces) rows = std::max(rows, t.rows.size());
  for (std::size_t k = 0; k < rows; ++k) {
    out << k;
    for (const auto& t : traces) {
      out << ',';
      if (k < t.rows.size()) out << format_double(t.rows[k].energy);
    }
    out << '\n';
  }
}

}  // namespace swflow
