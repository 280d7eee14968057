#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "swflow/descent.hpp"
#include "swflow/errors.hpp"

using namespace swflow;

namespace {

const ProjectedTarget kDisk{SlicedUniformDisk{1.0}};

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("separation constant") {
  // C(d) = 2 int_{<theta, e1> > 0} <theta, e1> dtheta
  const double c2 = oracle::integrate([](double t) { return std::cos(t); }, -std::numbers::pi / 2,
                                      std::numbers::pi / 2) /
                    std::numbers::pi;
  CHECK(separation_constant(2) == doctest::Approx(c2).epsilon(1e-12));
  CHECK(separation_constant(2) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(separation_constant(3) == doctest::Approx(0.5).epsilon(1e-15));
  const auto chk = check_separation_bound(uniform_box_cloud(100, 2, -1, 1, 1), kDisk);
  CHECK(chk.bound.value() == doctest::Approx(8.0 / (std::numbers::pi * 100)).epsilon(1e-14));
  CHECK_FALSE(check_separation_bound(uniform_box_cloud(10, 2, -1, 1, 1),
                                     ProjectedTarget(make_empirical(2, {0, 0, 1, 1})))
                  .bound.has_value());
}

TEST_CASE("descent lemma slack and separation for admissible steps") {
  const auto dirs = equispaced_circle(64, std::numbers::pi / 64);
  const auto x0 = uniform_box_cloud(60, 2, -1, 1, 7);
  const SlicedEvaluator ev(kDisk, dirs, 60, 1);
  for (double m : {0.5, 1.0, 1.5, 3.5}) {
    DescentConfig cfg;
    cfg.step_multiple = m;
    cfg.max_iters = 100;
    const auto res = run_descent(x0, ev, cfg);
    for (std::size_t k = 0; k + 1 < res.trace.rows.size(); ++k) {
      CHECK(res.trace.rows[k].lemma_slack <= 1e-9);
      CHECK(res.trace.rows[k + 1].energy <= res.trace.rows[k].energy);
      CHECK(res.trace.rows[k].min_sep > 0.0);
    }
    CHECK(std::isnan(res.trace.rows.back().lemma_slack));
    CHECK(res.trace.step == doctest::Approx(m * 60));
  }
}

TEST_CASE("converged runs respect the separation bound") {
  const auto dirs = equispaced_circle(64, std::numbers::pi / 64);
  const auto x0 = uniform_box_cloud(80, 2, -1, 1, 11);
  DescentConfig cfg;
  cfg.step_multiple = 1.0;
  cfg.max_iters = 400;
  const auto res = run_descent(x0, kDisk, dirs, cfg);
  CHECK(res.trace.stop == StopReason::Converged);
  CHECK(res.trace.rows.back().grad_norm <= 1e-8 * 80);
  const auto chk = check_separation_bound(res.cloud, kDisk);
  CHECK(chk.satisfied);
  CHECK(chk.min_separation >= *chk.bound - 1e-9);
  // residual = N grad
  CHECK(res.final_report.residual_max_norm() <= 80 * 1e-8 * 80);
}

TEST_CASE("step N d is the barycentric update") {
  const auto dirs = equispaced_circle(32, 0.01);
  DescentConfig cfg;
  cfg.step_multiple = 2.0;
  cfg.max_iters = 20;
  const auto res = run_descent(uniform_box_cloud(40, 2, -1, 1, 3), kDisk, dirs, cfg);
  CHECK(res.trace.barycentric_update_deviation <= 1e-12);
  cfg.step_multiple = 1.0;
  CHECK(std::isnan(run_descent(uniform_box_cloud(40, 2, -1, 1, 3), kDisk, dirs, cfg).trace.barycentric_update_deviation));
}

TEST_CASE("oversized steps trip the divergence detector") {
  const auto dirs = equispaced_circle(100, std::numbers::pi / 100);
  DescentConfig cfg;
  cfg.step_multiple = 10.0;  // lambda = 5 N d
  cfg.max_iters = 200;
  const auto res = run_descent(uniform_box_cloud(200, 2, -1, 1, 5), kDisk, dirs, cfg);
  CHECK(res.trace.stop == StopReason::Diverged);
  CHECK(to_string(res.trace.stop) == "diverged");
}

TEST_CASE("gradient norms are square summable along admissible runs") {
  const auto dirs = equispaced_circle(40, 0.2);
  DescentConfig cfg;
  cfg.step_multiple = 1.0;
  cfg.max_iters = 150;
  const auto res = run_descent(uniform_box_cloud(50, 2, -1, 1, 9), kDisk, dirs, cfg);
  const double lambda = res.trace.step, nd = 100.0;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < res.trace.rows.size(); ++k)
    sum += res.trace.rows[k].grad_norm * res.trace.rows[k].grad_norm;
  CHECK(lambda * (1 - lambda / (2 * nd)) * sum <= res.trace.rows.front().energy + 1e-12);
}

TEST_CASE("close pairs are pushed apart") {
  const auto dirs = equispaced_circle(64, 0.05);
  auto x0 = uniform_box_cloud(30, 2, -1, 1, 21);
  x0.coords()[2] = x0.coords()[0] + 1e-4;
  x0.coords()[3] = x0.coords()[1];
  DescentConfig cfg;
  cfg.step_multiple = 1.0;
  cfg.max_iters = 5;
  const auto res = run_descent(x0, kDisk, dirs, cfg);
  const double d1 = std::hypot(res.cloud.coords()[2] - res.cloud.coords()[0], res.cloud.coords()[3] - res.cloud.coords()[1]);
  CHECK(d1 > 1e-4);
  CHECK(res.trace.rows.back().min_sep > res.trace.rows.front().min_sep);
}

TEST_CASE("stopping rules and errors") {
  const auto dirs = equispaced_circle(16, 0.1);
  DescentConfig cfg;
  cfg.grad_tol = 1e3;
  CHECK(run_descent(uniform_box_cloud(10, 2, -1, 1, 1), kDisk, dirs, cfg).trace.stop == StopReason::Converged);
  cfg.grad_tol = 0.0;
  cfg.max_iters = 3;
  const auto r = run_descent(uniform_box_cloud(10, 2, -1, 1, 1), kDisk, dirs, cfg);
  CHECK(r.trace.stop == StopReason::MaxIters);
  CHECK(r.trace.steps() == 3);
  CHECK_THROWS_AS(run_descent(PointCloud(2, {0, 0, 0, 0}), kDisk, dirs, DescentConfig{}), OnDiagonalError);
}

TEST_CASE("trace and sweep CSV layout") {
  const auto dirs = equispaced_circle(16, 0.1);
  DescentConfig cfg;
  cfg.max_iters = 4;
  cfg.grad_tol = 0.0;
  const auto res = run_descent(uniform_box_cloud(10, 2, -1, 1, 1), kDisk, dirs, cfg);
  std::ostringstream out;
  res.trace.write_csv(out, "# pre");
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "# pre");
  CHECK(lines[1] == "k,energy,grad_norm,min_sep,lemma_slack");
  CHECK(lines[2].rfind("0,", 0) == 0);

  const SlicedEvaluator ev(kDisk, dirs, 10, 1);
  const auto table = step_size_sweep(uniform_box_cloud(10, 2, -1, 1, 1), ev, {0.5, 2.0}, 5);
  std::ostringstream sw;
  table.write_csv(sw, "# pre");
  const auto sl = lines_of(sw.str());
  CHECK(sl[1] == "k,energy_step_0.5N,energy_step_2N");
  // a one-entry sweep is the plain descent
  DescentConfig one;
  one.step_multiple = 2.0;
  one.max_iters = 5;
  const auto single = run_descent(uniform_box_cloud(10, 2, -1, 1, 1), ev, one);
  for (std::size_t k = 0; k < single.trace.rows.size(); ++k)
    CHECK(table.traces[1].rows[k].energy == single.trace.rows[k].energy);
}

TEST_CASE("uniform box initialization is seeded") {
  const auto a = uniform_box_cloud(50, 2, -1, 1, 2024), b = uniform_box_cloud(50, 2, -1, 1, 2024);
  CHECK(a.coords() == b.coords());
  for (double v : a.coords()) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  CHECK(a.coords() != uniform_box_cloud(50, 2, -1, 1, 2025).coords());
}
