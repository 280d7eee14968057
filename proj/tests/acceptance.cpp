// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "swflow/descent.hpp"
#include "swflow/landscape.hpp"
#include "swflow/ot1d.hpp"
#include "swflow/swgrad.hpp"

using namespace swflow;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int g_failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.require(secs < budget_s, "runtime " + fmt(secs) + " s over budget " + fmt(budget_s) + " s");
  if (!v.pass) ++g_failures;
  std::printf("criterion %d %s: %s [%.2f s] %s\n", id, v.pass ? "PASS" : "FAIL", title, secs, v.detail.c_str());
  std::fflush(stdout);
}

const ProjectedTarget kDisk{SlicedUniformDisk{1.0}};
const ProjectedTarget kGauss{IsotropicGaussian{2, 1.0}};

// max_k |a_k - b_k| / max_k |b_k|
double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    err = std::max(err, std::abs(a[k] - b[k]));
    scale = std::max(scale, std::abs(b[k]));
  }
  return err / scale;
}

DirectionSet half_step(std::size_t count) { return equispaced_circle(count, std::numbers::pi / count); }

void c1_ot_oracle(Verdict& v) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> size(1, 6);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = size(rng);
    const auto x = oracle::random_points(n, rng, -2, 2), y = oracle::random_points(n, rng, -2, 2);
    for (double p : {1.0, 2.0, 3.0}) worst = std::max(worst, std::abs(wpp_discrete(x, y, p) - oracle::brute_force_wpp(x, y, p)));
  }
  v.require(worst <= 1e-10, "max deviation " + fmt(worst));
  v.note("200 instances x p in {1,2,3}, max |sorted - brute force| = " + fmt(worst));
}

// Smallest gap between sorted projections over all directions.
double min_projection_gap(const PointCloud& x, const DirectionSet& dirs) {
  double gap = INFINITY;
  std::vector<double> p(x.size());
  for (std::size_t l = 0; l < dirs.size(); ++l) {
    const auto th = dirs.direction(l);
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = x.point(i)[0] * th[0] + x.point(i)[1] * th[1];
    std::sort(p.begin(), p.end());
    for (std::size_t i = 1; i < p.size(); ++i) gap = std::min(gap, p[i] - p[i - 1]);
  }
  return gap;
}

void c2_gradient(Verdict& v) {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> size(2, 20);
  const auto dirs = equispaced_circle(64, 0.123);
  const double h = 1e-5;
  double worst2 = 0.0, worst3 = 0.0;
  int redrawn = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = size(rng);
    PointCloud x(2, oracle::random_points(2 * n, rng));
    // F is piecewise smooth; the difference stencil must not cross a projection tie
    while (min_projection_gap(x, dirs) <= 2 * h) {
      x = PointCloud(2, oracle::random_points(2 * n, rng));
      ++redrawn;
    }
    const SlicedEvaluator ev(rep % 2 ? kGauss : kDisk, dirs, n, 1);
    const auto fd2 = oracle::central_gradient([&](const std::vector<double>& c) { return ev.energy(PointCloud(2, c)); },
                                              x.coords(), h);
    worst2 = std::max(worst2, rel_error(ev.gradient(x).grads, fd2));
    const auto fd3 = oracle::central_gradient(
        [&](const std::vector<double>& c) { return ev.energy_p(PointCloud(2, c), 3.0); }, x.coords(), h);
    worst3 = std::max(worst3, rel_error(ev.gradient_p(x, 3.0).grads, fd3));
  }
  v.require(worst2 <= 1e-5, "p=2 error " + fmt(worst2));
  v.require(worst3 <= 1e-4, "p=3 error " + fmt(worst3));
  v.note("max relative error p=2 " + fmt(worst2) + ", p=3 " + fmt(worst3) + " (" + std::to_string(redrawn) +
         " clouds redrawn for a projection gap <= 2h)");
}

void c3_descent_lemma(Verdict& v) {
  const std::size_t n = 200;
  const auto x0 = uniform_box_cloud(n, 2, -1, 1, 303);
  const SlicedEvaluator ev(kDisk, half_step(100), n, 0);
  double worst = -INFINITY;
  for (double frac : {0.5, 1.0, 1.5}) {
    DescentConfig cfg;
    cfg.step_multiple = 2.0 * frac;  // lambda = frac * N d
    cfg.max_iters = 200;
    cfg.grad_tol = 0.0;
    const auto res = run_descent(x0, ev, cfg);
    v.require(res.trace.steps() == 200, "run with lambda=" + fmt(frac) + "Nd stopped early");
    for (std::size_t k = 0; k + 1 < res.trace.rows.size(); ++k) worst = std::max(worst, res.trace.rows[k].lemma_slack);
  }
  v.require(worst <= 1e-9, "max slack " + fmt(worst));
  v.note("lambda in {0.5,1,1.5} Nd, 200 iterations each, max lemma_slack = " + fmt(worst));
}

void c4_separation(Verdict& v) {
  const std::size_t n = 200;
  const auto x0 = uniform_box_cloud(n, 2, -1, 1, 303);
  const SlicedEvaluator ev(kDisk, half_step(100), n, 0);
  const double bound = 8.0 / (std::numbers::pi * n);
  double least_final = INFINITY, least_any = INFINITY;
  for (double frac : {0.25, 0.5, 0.75}) {
    DescentConfig cfg;
    cfg.step_multiple = 2.0 * frac;
    cfg.max_iters = 5000;
    const auto res = run_descent(x0, ev, cfg);
    v.require(res.trace.stop == StopReason::Converged, "lambda=" + fmt(frac) + "Nd did not converge");
    for (const auto& row : res.trace.rows) least_any = std::min(least_any, row.min_sep);
    least_final = std::min(least_final, res.trace.rows.back().min_sep);
  }
  v.require(least_any > 0.0, "collision");
  v.require(least_final >= bound - 1e-9, "final min_sep " + fmt(least_final) + " below bound " + fmt(bound));
  v.note("lambda in {0.25,0.5,0.75} Nd: min_sep over all iterates " + fmt(least_any) + ", at convergence " +
         fmt(least_final) + " >= 8/(pi N) = " + fmt(bound));
}

void c5_critical_points(Verdict& v) {
  const std::size_t count = 2000;
  const auto dirs = half_step(count);
  const std::vector<std::size_t> sizes{25, 50, 100, 200};

  std::vector<double> seg;
  for (std::size_t n : sizes) seg.push_back(SlicedEvaluator(kDisk, dirs, n, 0).gradient(segment_critical_cloud(n)).residual_max_norm());
  for (std::size_t k = 1; k < seg.size(); ++k) v.require(seg[k] < seg[k - 1], "segment residual not decreasing");
  v.require(seg.back() <= 1e-2, "segment residual " + fmt(seg.back()) + " at N=200");

  const double alpha_ref =
      2.0 * oracle::integrate([](double t) { return std::abs(std::cos(t)); }, 0.0, 2 * std::numbers::pi, 1e-14) /
      (2 * std::numbers::pi);
  const double alpha = alpha_d(dirs);
  v.require(std::abs(alpha - alpha_ref) <= 1e-6, "alpha_2 error " + fmt(std::abs(alpha - alpha_ref)));

  std::vector<double> gauss, gnorm;
  double max_comp = 0.0;
  for (std::size_t n : sizes) {
    const auto rep = SlicedEvaluator(kGauss, dirs, n, 0).gradient(gaussian_line_critical_cloud(n, 2, dirs));
    gauss.push_back(rep.residual_max_norm());
    gnorm.push_back(rep.grad_norm);
    if (n == sizes.back())
      for (double g : rep.grads) max_comp = std::max(max_comp, std::abs(g));
  }
  for (std::size_t k = 1; k < gauss.size(); ++k) {
    v.require(gauss[k] < gauss[k - 1], "gaussian residual not decreasing");
    v.require(gnorm[k] < gnorm[k - 1], "gaussian grad_norm not decreasing");
  }
  v.require(max_comp <= 1e-3, "gaussian gradient component " + fmt(max_comp));
  v.note("segment residual " + fmt(seg[0]) + " > " + fmt(seg[1]) + " > " + fmt(seg[2]) + " > " + fmt(seg[3]) +
         "; gaussian residual " + fmt(gauss[0]) + " > " + fmt(gauss[1]) + " > " + fmt(gauss[2]) + " > " +
         fmt(gauss[3]) + " (max gradient component " + fmt(max_comp) + "); |alpha_2 - 4/pi| = " +
         fmt(std::abs(alpha - alpha_ref)));
}

void c6_instability(Verdict& v) {
  const auto dirs = equispaced_circle(100, 0.0);
  const std::vector<double> deltas{0.01, 0.02, 0.05};
  const auto seg = segment_critical_cloud(100);
  const auto xi = alternating_field(100, 2);
  const ProjectedTarget shell(sample_shell(1.0, 2.0, 10000, 42));

  v.require(local_max_at_zero(seg, xi, deltas, SlicedEvaluator(kGauss, dirs, 100, 0)), "(a) gaussian");
  v.require(local_max_at_zero(seg, xi, deltas, SlicedEvaluator(kDisk, dirs, 100, 0)), "(b) sliced uniform");
  v.require(local_max_at_zero(seg, xi, deltas, SlicedEvaluator(shell, dirs, 100, 0)), "(c) shell");
  const auto bell = dumbbell_cloud();
  v.require(local_max_at_zero(bell.cloud, alternating_field(bell.cloud.size(), 2, bell.on_segment), deltas,
                              SlicedEvaluator(shell, dirs, bell.cloud.size(), 0)),
            "(d) dumbbell");

  const double n_hat[2] = {0.0, 1.0};
  const auto curve = perturb_split_translation(seg, n_hat, symmetric_grid(201, 1e-4), SlicedEvaluator(kDisk, dirs, 200, 0));
  const double r = instability_envelope_radius(curve, 100.0);
  v.require(r > 0.0, "no interval with value(t) <= value(0) - 100 t^2");
  v.note("local max for (a)(b)(c)(d); split-translation envelope C=100 holds on [-" + fmt(r) + ", " + fmt(r) + "]");
}

void c7_cells(Verdict& v) {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> size(2, 20), count(3, 40);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = size(rng);
    const PointCloud x(2, oracle::random_points(2 * n, rng));
    const auto dirs = rep % 2 ? equispaced_circle(count(rng), phase(rng)) : sampled_sphere(2, count(rng), rng());
    const SlicedEvaluator ev(rep % 3 ? kDisk : kGauss, dirs, n, 1);
    const auto cell = analyze_cell(x, ev);
    worst = std::max(worst, std::abs(cell.evaluate_q(x) + cell.c0 - estimator_fl(x, ev.target(), dirs)));
  }
  v.require(worst <= 1e-9, "q + C0 mismatch " + fmt(worst));

  int convex = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = size(rng);
    const PointCloud x(2, oracle::random_points(2 * n, rng));
    convex += analyze_cell(x, SlicedEvaluator(kDisk, sampled_sphere(2, 100, rng()), n, 1)).strictly_convex;
  }
  v.require(convex == 10, "strictly_convex false for a random L=100 set");

  const auto seg = segment_critical_cloud(100);
  const auto xi = alternating_field(100, 2);
  const auto ts = symmetric_grid(41, 2e-5);
  const double h = ts[21] - ts[20];
  const DirectionSet e2(2, {0.0, 1.0}, {1.0}, DirectionSet::Kind::Explicit, 0.0);
  const auto single = kink_scan(seg, xi, ts, SlicedEvaluator(kDisk, e2, 100, 1));
  double closed = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j)
    closed = std::max(closed, std::abs(2.0 * single.curve.values[j] - (1.0 / 3.0 - std::abs(ts[j]) + ts[j] * ts[j])));
  v.require(closed <= 1e-9, "L=1 closed form deviation " + fmt(closed));

  std::string jumps;
  for (std::size_t count_l : {10u, 20u, 40u, 100u}) {
    const double with = kink_scan(seg, xi, ts, SlicedEvaluator(kDisk, equispaced_circle(count_l, std::numbers::pi / 2), 100, 1)).slope_jump;
    const double expect = -2.0 / count_l;
    v.require(std::abs(with - expect) <= 0.2 * std::abs(expect), "L=" + std::to_string(count_l) + " jump " + fmt(with));
    const double without = kink_scan(seg, xi, ts,
                                     SlicedEvaluator(kDisk, equispaced_circle(count_l, std::numbers::pi / 2 + std::numbers::pi / count_l), 100, 1))
                               .slope_jump;
    v.require(std::abs(without) <= h, "L=" + std::to_string(count_l) + " jump without e2 " + fmt(without));
    jumps += " L=" + std::to_string(count_l) + ":" + fmt(with) + "/" + fmt(without);
  }
  v.note("max |F_L - q - C0| = " + fmt(worst) + "; L=1 closed form dev " + fmt(closed) +
         "; slope jumps with/without e2 (F_L, expected -2/L / <= " + fmt(h) + "):" + jumps);
}

void c8_step_sizes(Verdict& v) {
  const std::size_t n = 1000;
  const auto x0 = uniform_box_cloud(n, 2, -1, 1, 2024);
  const SlicedEvaluator ev(kDisk, half_step(100), n, 0);
  const auto table = step_size_sweep(x0, ev, {0.5, 2.0}, 10);
  const double slow = table.traces[0].rows.back().energy, fast = table.traces[1].rows.back().energy;
  v.require(fast < slow, "lambda=2N not below lambda=0.5N after 10 iterations");
  DescentConfig cfg;
  cfg.step_multiple = 10.0;  // 5 N d
  cfg.max_iters = 200;
  const auto res = run_descent(x0, ev, cfg);
  v.require(res.trace.stop == StopReason::Diverged, "lambda=5Nd stop_reason " + to_string(res.trace.stop));
  v.note("energy after 10 iterations: 2N " + fmt(fast) + " < 0.5N " + fmt(slow) + "; 5Nd -> " + to_string(res.trace.stop) +
         " after " + std::to_string(res.trace.steps()) + " steps");
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void c9_determinism(Verdict& v) {
  const fs::path dir = fs::temp_directory_path() / ("swflow_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"descend", R"({"format_version":1,"n":300,"seed":9,"directions":{"kind":"equispaced","L":100,"half_step":true},"step_multiple":1.0,"max_iters":150})"},
      {"sweep", R"({"format_version":1,"n":300,"seed":9,"multiples":[0.5,2,10],"iters":40})"},
      {"perturb", R"({"format_version":1,"mode":"vector_field","cloud":{"kind":"dumbbell"},"target":{"kind":"empirical","sampler":"shell","r_in":1,"r_out":2,"M":10000},"grid":{"count":41,"half_width":0.1}})"},
      {"perturb", R"({"format_version":1,"mode":"split_translation","cloud":{"kind":"segment","n":100},"grid":{"count":101,"half_width":1e-4}})"},
      {"perturb", R"({"format_version":1,"mode":"kink","cloud":{"kind":"segment","n":100},"directions":{"kind":"equispaced","L":40,"phase":1.5707963267948966},"grid":{"count":41,"half_width":2e-5}})"},
      {"criticality", R"({"format_version":1,"cloud":{"kind":"gaussian_line","n":200},"target":{"kind":"gaussian","sigma":1},"directions":{"kind":"equispaced","L":500,"half_step":true}})"},
      {"cells", R"({"format_version":1,"cloud":{"kind":"segment","n":30},"directions":{"kind":"sampled","L":100}})"},
  };
  std::size_t compared = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto cfg = dir / ("cfg" + std::to_string(r) + ".json");
    std::ofstream(cfg) << runs[r].second;
    std::vector<fs::path> outs;
    for (int threads : {1, 4}) {
      const auto out = dir / ("run" + std::to_string(r) + "_t" + std::to_string(threads));
      const std::string cmd = std::string(SWFLOW_CLI_PATH) + " " + runs[r].first + " --config " + cfg.string() +
                              " --out " + out.string() + " --threads " + std::to_string(threads) + " > " +
                              out.string() + ".stdout 2>&1";
      const int rc = std::system(cmd.c_str());
      v.require(rc == 0, runs[r].first + " exited with " + std::to_string(rc));
      outs.push_back(out);
    }
    for (const auto& entry : fs::directory_iterator(outs[0])) {
      const auto other = outs[1] / entry.path().filename();
      v.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
                runs[r].first + " " + entry.path().filename().string() + " differs");
      ++compared;
    }
    v.require(slurp(outs[0].string() + ".stdout") == slurp(outs[1].string() + ".stdout"), runs[r].first + " stdout differs");
  }
  fs::remove_all(dir);
  v.note(std::to_string(runs.size()) + " runs, " + std::to_string(compared) +
         " output files byte-identical between --threads 1 and --threads 4");
}

}  // namespace

int main() {
  criterion(1, "1D OT oracle equivalence", 5, c1_ot_oracle);
  criterion(2, "gradient correctness", 30, c2_gradient);
  criterion(3, "descent lemma", 60, c3_descent_lemma);
  criterion(4, "separation", 60, c4_separation);
  criterion(5, "closed-form critical points", 120, c5_critical_points);
  criterion(6, "instability", 180, c6_instability);
  criterion(7, "F_L cell structure", 60, c7_cells);
  criterion(8, "step-size phenomenology", 120, c8_step_sizes);
  criterion(9, "determinism", 300, c9_determinism);
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
