#include "swflow/measure1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "swflow/special.hpp"

namespace swflow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_cell(std::size_t n, std::size_t i) {
  if (n == 0) throw std::invalid_argument("cell count must be >= 1");
  if (i >= n) throw std::out_of_range("cell index out of range");
}

double signed_pow(double x, double p) { return x < 0.0 ? -std::pow(-x, p) : std::pow(x, p); }

// Standard-normal cell boundaries in z units; infinite ends clipped where the
// density underflows.
constexpr double kNormalClip = 38.0;

double normal_knot(std::size_t k, std::size_t n) {
  if (k == 0) return -kNormalClip;
  if (k == n) return kNormalClip;
  return normal_quantile(static_cast<double>(k) / static_cast<double>(n));
}

// Composite 32-point Gauss-Legendre of f(z) phi(z) over [z0, z1], split at
// `kink` when it lies inside and with panels no wider than 0.5.
template <class F>
double normal_panel_integral(double z0, double z1, double kink, F&& f) {
  const auto& gl = gauss_legendre32();
  auto piece = [&](double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.5)));
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double a = lo + k * width;
      const double half = 0.5 * width;
      const double mid = a + half;
      double s = 0.0;
      for (int j = 0; j < GaussLegendre32::kNodes; ++j) {
        const double z = mid + half * gl.nodes[j];
        s += gl.weights[j] * f(z) * normal_pdf(z);
      }
      total += half * s;
    }
    return total;
  };
  if (kink > z0 && kink < z1) return piece(z0, kink) + piece(kink, z1);
  return piece(z0, z1);
}


// Visits the pieces of block i without materializing the full decomposition.
template <class F>
void for_each_block_piece(const Atomic1D& a, std::size_t n, std::size_t i, F&& f) {
  const double dn = static_cast<double>(n);
  const double start = i == 0 ? 0.0 : static_cast<double>(i) / dn;
  const double end = i + 1 == n ? 1.0 : static_cast<double>(i + 1) / dn;
  auto it = std::upper_bound(a.cumulative.begin(), a.cumulative.end(), start);
  for (auto j = static_cast<std::size_t>(it - a.cumulative.begin()); j < a.values.size(); ++j) {
    const double lo = std::max(j == 0 ? 0.0 : a.cumulative[j - 1], start);
    const double hi = std::min(a.cumulative[j], end);
    if (hi > lo) f(a.values[j], hi - lo);
    if (a.cumulative[j] >= end) break;
  }
}

}  // namespace

Atomic1D Atomic1D::from_unsorted(std::vector<double> values, std::vector<double> masses) {
  if (values.empty()) throw std::invalid_argument("Atomic1D: empty support");
  if (values.size() != masses.size()) throw std::invalid_argument("Atomic1D: size mismatch");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  Atomic1D out;
  double total = 0.0;
  for (std::size_t idx : order) {
    const double m = masses[idx];
    if (!(m > 0.0)) throw std::invalid_argument("Atomic1D: masses must be positive");
    if (!out.values.empty() && out.values.back() == values[idx]) {
      out.masses.back() += m;
    } else {
      out.values.push_back(values[idx]);
      out.masses.push_back(m);
    }
    total += m;
  }
  for (double& m : out.masses) m /= total;
  out.cumulative.resize(out.masses.size());
  double c = 0.0;
  for (std::size_t j = 0; j < out.masses.size(); ++j) {
    c += out.masses[j];
    out.cumulative[j] = c;
  }
  out.cumulative.back() = 1.0;
  return out;
}

double quantile(const Measure1D& m, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("quantile: t must lie in (0,1)");
  return std::visit(
      overloaded{
          [t](const UniformInterval& u) { return u.lo + t * (u.hi - u.lo); },
          [t](const Normal1D& g) { return g.mean + g.sigma * normal_quantile(t); },
          [t](const Atomic1D& a) {
            auto it = std::lower_bound(a.cumulative.begin(), a.cumulative.end(), t);
            if (it == a.cumulative.end()) --it;
            return a.values[static_cast<std::size_t>(it - a.cumulative.begin())];
          },
      },
      m);
}

double mean(const Measure1D& m) {
  return std::visit(overloaded{
                        [](const UniformInterval& u) { return 0.5 * (u.lo + u.hi); },
                        [](const Normal1D& g) { return g.mean; },
                        [](const Atomic1D& a) {
                          double s = 0.0;
                          for (std::size_t j = 0; j < a.values.size(); ++j)
                            s += a.masses[j] * a.values[j];
                          return s;
                        },
                    },
                    m);
}

std::optional<double> density_bound(const Measure1D& m) {
  return std::visit(
      overloaded{
          [](const UniformInterval& u) -> std::optional<double> { return 1.0 / (u.hi - u.lo); },
          [](const Normal1D& g) -> std::optional<double> {
            return 1.0 / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
          },
          [](const Atomic1D&) -> std::optional<double> { return std::nullopt; },
      },
      m);
}

std::vector<BlockPiece> block_decomposition(const Atomic1D& a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("block_decomposition: N must be >= 1");
  std::vector<BlockPiece> pieces;
  pieces.reserve(a.values.size() + n);
  const double dn = static_cast<double>(n);
  std::size_t block = 0;
  double prev = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    const double hi = a.cumulative[j];
    double lo = prev;
    while (block < n) {
      const double block_end = block + 1 == n ? 1.0 : static_cast<double>(block + 1) / dn;
      const double upper = std::min(hi, block_end);
      if (upper > lo) pieces.push_back({block, a.values[j], upper - lo});
      if (hi >= block_end) {
        ++block;
        lo = upper;
        if (hi == block_end) break;
      } else {
        break;
      }
    }
    prev = hi;
  }
  return pieces;
}

CellTable cell_table(const Measure1D& m, std::size_t n) {
  if (n == 0) throw std::invalid_argument("cell_table: N must be >= 1");
  CellTable t;
  t.n = n;
  t.barycenters.resize(n);
  t.second_moments.resize(n);
  t.variances.resize(n);
  t.masses.assign(n, 1.0 / static_cast<double>(n));
  const double dn = static_cast<double>(n);

  std::visit(
      overloaded{
          [&](const UniformInterval& u) {
            const double h = (u.hi - u.lo) / dn;
            const double var = h * h / 12.0;
            for (std::size_t i = 0; i < n; ++i) {
              const double c0 = u.lo + static_cast<double>(i) * h;
              const double b = c0 + 0.5 * h;
              t.barycenters[i] = b;
              t.variances[i] = var;
            }
          },
          [&](const Normal1D& g) {
            double z0 = -std::numeric_limits<double>::infinity();
            double pdf0 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              const double z1 = i + 1 == n ? std::numeric_limits<double>::infinity()
                                           : normal_quantile(static_cast<double>(i + 1) / dn);
              const double pdf1 = std::isinf(z1) ? 0.0 : normal_pdf(z1);
              const double zpdf0 = std::isinf(z0) ? 0.0 : z0 * pdf0;
              const double zpdf1 = std::isinf(z1) ? 0.0 : z1 * pdf1;
              const double ez = dn * (pdf0 - pdf1);
              const double ez2 = 1.0 + dn * (zpdf0 - zpdf1);
              t.barycenters[i] = g.mean + g.sigma * ez;
              t.variances[i] = g.sigma * g.sigma * std::max(0.0, ez2 - ez * ez);
              z0 = z1;
              pdf0 = pdf1;
            }
          },
          [&](const Atomic1D& a) {
            const auto pieces = block_decomposition(a, n);
            std::vector<double> mass(n, 0.0);
            for (const auto& pc : pieces) {
              t.barycenters[pc.block] += pc.mass * pc.value;
              mass[pc.block] += pc.mass;
            }
            for (std::size_t i = 0; i < n; ++i) t.barycenters[i] /= mass[i];
            for (const auto& pc : pieces) {
              const double dev = pc.value - t.barycenters[pc.block];
              t.variances[pc.block] += pc.mass * dev * dev;
            }
            for (std::size_t i = 0; i < n; ++i) t.variances[i] /= mass[i];
          },
      },
      m);

  for (std::size_t i = 0; i < n; ++i) {
    t.second_moments[i] = t.barycenters[i] * t.barycenters[i] + t.variances[i];
    t.variance_sum += t.variances[i];
  }
  return t;
}

double cell_integral_p(const Measure1D& m, std::size_t n, std::size_t i, double a, double p) {
  check_cell(n, i);
  if (!(p >= 2.0)) throw std::domain_error("cell_integral_p: p must be >= 2");
  const double dn = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const UniformInterval& u) {
            const double h = (u.hi - u.lo) / dn;
            const double c0 = u.lo + static_cast<double>(i) * h;
            const double c1 = c0 + h;
            return (std::pow(std::abs(a - c0), p) - std::pow(std::abs(a - c1), p)) /
                   (p * (u.hi - u.lo));
          },
          [&](const Normal1D& g) {
            const double z0 = normal_knot(i, n);
            const double z1 = normal_knot(i + 1, n);
            const double za = (a - g.mean) / g.sigma;
            return normal_panel_integral(z0, z1, za, [&](double z) {
              return signed_pow(a - (g.mean + g.sigma * z), p - 1.0);
            });
          },
          [&](const Atomic1D& at) {
            double s = 0.0;
            for_each_block_piece(at, n, i, [&](double y, double mass) {
              s += mass * signed_pow(a - y, p - 1.0);
            });
            return s;
          },
      },
      m);
}

double cell_abs_moment_p(const Measure1D& m, std::size_t n, std::size_t i, double a, double p) {
  check_cell(n, i);
  if (!(p >= 1.0)) throw std::domain_error("cell_abs_moment_p: p must be >= 1");
  const double dn = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const UniformInterval& u) {
            const double h = (u.hi - u.lo) / dn;
            const double c0 = u.lo + static_cast<double>(i) * h;
            const double c1 = c0 + h;
            return (signed_pow(c1 - a, p + 1.0) - signed_pow(c0 - a, p + 1.0)) /
                   ((p + 1.0) * (u.hi - u.lo));
          },
          [&](const Normal1D& g) {
            const double z0 = normal_knot(i, n);
            const double z1 = normal_knot(i + 1, n);
            const double za = (a - g.mean) / g.sigma;
            return normal_panel_integral(z0, z1, za, [&](double z) {
              return std::pow(std::abs(a - (g.mean + g.sigma * z)), p);
            });
          },
          [&](const Atomic1D& at) {
            double s = 0.0;
            for_each_block_piece(at, n, i, [&](double y, double mass) {
              s += mass * std::pow(std::abs(a - y), p);
            });
            return s;
          },
      },
      m);
}

}  // namespace swflow
