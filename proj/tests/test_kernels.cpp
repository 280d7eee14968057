#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "swflow/kernels.hpp"

using namespace swflow;

namespace {

struct Soa {
  std::vector<std::vector<double>> cols;
  std::vector<const double*> ptrs;
  std::vector<double*> mptrs;
  Soa(std::size_t dim, std::size_t n, std::mt19937_64& rng) : cols(dim) {
    for (auto& c : cols) {
      c = oracle::random_points(n, rng, -2, 2);
      ptrs.push_back(c.data());
      mptrs.push_back(c.data());
    }
  }
};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels against plain loops") {
  const auto& k = scalar_kernels();
  std::mt19937_64 rng(1);
  Soa x(3, 11, rng);
  const double theta[3] = {0.48, 0.6, 0.64};
  std::vector<double> out(11);
  k.project(x.ptrs.data(), 3, 11, theta, out.data());
  for (std::size_t i = 0; i < 11; ++i)
    CHECK(out[i] == doctest::Approx(x.cols[0][i] * theta[0] + x.cols[1][i] * theta[1] + x.cols[2][i] * theta[2]));

  const auto a = oracle::random_points(11, rng), b = oracle::random_points(11, rng);
  double s = 0.0;
  for (std::size_t i = 0; i < 11; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(k.sq_diff_sum(a.data(), b.data(), 11) == doctest::Approx(s).epsilon(1e-15));

  const double q[3] = {0.1, 0.2, 0.3};
  double best = INFINITY;
  for (std::size_t j = 4; j < 11; ++j) {
    double d = 0.0;
    for (int c = 0; c < 3; ++c) d += (x.cols[c][j] - q[c]) * (x.cols[c][j] - q[c]);
    best = std::min(best, d);
  }
  CHECK(k.min_sq_dist(x.ptrs.data(), 3, 11, q, 4) == best);
  CHECK(std::isinf(k.min_sq_dist(x.ptrs.data(), 3, 11, q, 11)));
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& s = scalar_kernels();
  std::mt19937_64 rng(2);
  for (std::size_t dim : {1u, 2u, 3u, 5u}) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 37u, 1000u}) {
      Soa x(dim, n, rng);
      std::vector<double> theta = oracle::random_points(dim, rng);

      std::vector<double> ps(n), pv(n);
      s.project(x.ptrs.data(), dim, n, theta.data(), ps.data());
      v->project(x.ptrs.data(), dim, n, theta.data(), pv.data());
      CHECK(same_bits(ps, pv));

      const auto b = oracle::random_points(n, rng);
      std::vector<std::uint32_t> rank(n);
      std::iota(rank.begin(), rank.end(), 0u);
      std::shuffle(rank.begin(), rank.end(), rng);
      std::vector<double> rs(n), rv(n);
      s.gather_residual(ps.data(), b.data(), rank.data(), n, rs.data());
      v->gather_residual(ps.data(), b.data(), rank.data(), n, rv.data());
      CHECK(same_bits(rs, rv));

      Soa gs(dim, n, rng);
      Soa gv = gs;
      for (std::size_t c = 0; c < dim; ++c) gv.mptrs[c] = gv.cols[c].data();
      s.accumulate(gs.mptrs.data(), dim, n, rs.data(), 0.37, theta.data());
      v->accumulate(gv.mptrs.data(), dim, n, rs.data(), 0.37, theta.data());
      for (std::size_t c = 0; c < dim; ++c) CHECK(same_bits(gs.cols[c], gv.cols[c]));

      const double ss = s.sq_diff_sum(ps.data(), b.data(), n), sv = v->sq_diff_sum(ps.data(), b.data(), n);
      CHECK(std::abs(ss - sv) <= 1e-14 * std::max(1.0, std::abs(ss)));

      const std::vector<double> q = oracle::random_points(dim, rng);
      for (std::size_t begin : {std::size_t{0}, n / 2, n}) {
        const double ms = s.min_sq_dist(x.ptrs.data(), dim, n, q.data(), begin);
        const double mv = v->min_sq_dist(x.ptrs.data(), dim, n, q.data(), begin);
        CHECK(std::memcmp(&ms, &mv, sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("active kernel selection") {
  const auto& a = active_kernels();
  const bool is_scalar = std::strcmp(a.name, scalar_kernels().name) == 0;
  const bool is_avx2 = avx2_kernels() != nullptr && std::strcmp(a.name, avx2_kernels()->name) == 0;
  CHECK((is_scalar || is_avx2));
}
