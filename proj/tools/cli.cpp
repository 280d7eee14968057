#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "swflow/descent.hpp"
#include "swflow/directions.hpp"
#include "swflow/errors.hpp"
#include "swflow/io.hpp"
#include "swflow/landscape.hpp"
#include "swflow/parallel.hpp"
#include "swflow/point_cloud.hpp"
#include "swflow/swgrad.hpp"
#include "swflow/targets.hpp"

namespace swflow::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::set<std::string> common{"format_version", "dim", "seed", "target", "directions"};
  static const std::map<std::string, std::set<std::string>> table = [] {
    auto with = [](std::initializer_list<std::string> extra) {
      auto s = common;
      s.insert(extra);
      return s;
    };
    return std::map<std::string, std::set<std::string>>{
        {"descend", with({"n", "init", "step_multiple", "max_iters", "grad_tol"})},
        {"sweep", with({"n", "init", "multiples", "iters"})},
        {"perturb", with({"mode", "cloud", "grid", "deltas", "normal", "envelope_c"})},
        {"criticality", with({"cloud", "tol"})},
        {"cells", with({"cloud"})},
    };
  }();
  return table;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

InitSpec init_from_json(const json& j) {
  reject_unknown(j, {"kind", "lo", "hi", "path"}, "init");
  InitSpec s;
  read(j, "kind", s.kind);
  read(j, "lo", s.lo);
  read(j, "hi", s.hi);
  read(j, "path", s.path);
  if (s.kind != "uniform_box" && s.kind != "file") throw ConfigError("init: unknown kind '" + s.kind + "'");
  if (s.kind == "file" && s.path.empty()) throw ConfigError("init: file kind needs a path");
  if (!(s.lo < s.hi)) throw ConfigError("init: need lo < hi");
  return s;
}

json init_to_json(const InitSpec& s) {
  if (s.kind == "file") return {{"kind", s.kind}, {"path", s.path}};
  return {{"kind", s.kind}, {"lo", s.lo}, {"hi", s.hi}};
}

CloudSpec cloud_from_json(const json& j) {
  reject_unknown(j, {"kind", "n", "segment_points", "ring_points", "path"}, "cloud");
  CloudSpec s;
  read(j, "kind", s.kind);
  read(j, "n", s.n);
  read(j, "segment_points", s.segment_points);
  read(j, "ring_points", s.ring_points);
  read(j, "path", s.path);
  static const std::set<std::string> kinds{"segment", "dumbbell", "gaussian_line", "file"};
  if (!kinds.count(s.kind)) throw ConfigError("cloud: unknown kind '" + s.kind + "'");
  if (s.kind == "file" && s.path.empty()) throw ConfigError("cloud: file kind needs a path");
  return s;
}

json cloud_to_json(const CloudSpec& s) {
  if (s.kind == "file") return {{"kind", s.kind}, {"path", s.path}};
  if (s.kind == "dumbbell")
    return {{"kind", s.kind}, {"segment_points", s.segment_points}, {"ring_points", s.ring_points}};
  return {{"kind", s.kind}, {"n", s.n}};
}

GridSpec grid_from_json(const json& j) {
  reject_unknown(j, {"count", "half_width", "ts"}, "grid");
  GridSpec s;
  read(j, "count", s.count);
  read(j, "half_width", s.half_width);
  read(j, "ts", s.ts);
  return s;
}

json grid_to_json(const GridSpec& s) {
  if (!s.ts.empty()) return {{"ts", s.ts}};
  return {{"count", s.count}, {"half_width", s.half_width}};
}

}  // namespace

RunConfig config_from_json(const std::string& command, const json& j) {
  const auto it = allowed_keys().find(command);
  if (it == allowed_keys().end()) throw ConfigError("unknown command '" + command + "'");
  reject_unknown(j, it->second, "config");
  RunConfig c;
  c.command = command;
  try {
    if (!j.contains("format_version")) throw ConfigError("config: missing format_version");
    c.format_version = j.at("format_version").get<int>();
    if (c.format_version != kFormatVersion)
      throw ConfigError("config: unsupported format_version " + std::to_string(c.format_version));
    read(j, "dim", c.dim);
    read(j, "seed", c.seed);
    if (j.contains("target")) c.target = j.at("target");
    if (j.contains("directions")) c.directions = j.at("directions");
    read(j, "n", c.n);
    if (j.contains("init")) c.init = init_from_json(j.at("init"));
    read(j, "step_multiple", c.step_multiple);
    read(j, "max_iters", c.max_iters);
    if (j.contains("grad_tol")) c.grad_tol = j.at("grad_tol").get<double>();
    read(j, "multiples", c.multiples);
    read(j, "iters", c.iters);
    read(j, "mode", c.mode);
    if (j.contains("cloud")) c.cloud = cloud_from_json(j.at("cloud"));
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    read(j, "deltas", c.deltas);
    read(j, "normal", c.normal);
    read(j, "envelope_c", c.envelope_c);
    read(j, "tol", c.tol);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.dim == 0) throw ConfigError("config: dim must be positive");
  if (!c.target.is_object() || !c.target.contains("kind")) throw ConfigError("target: needs a kind");
  if (!c.directions.is_object() || !c.directions.contains("kind")) throw ConfigError("directions: needs a kind");
  if (c.mode != "vector_field" && c.mode != "split_translation" && c.mode != "kink")
    throw ConfigError("config: unknown mode '" + c.mode + "'");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j{{"format_version", c.format_version}, {"dim", c.dim},           {"seed", c.seed},
         {"target", c.target},                 {"directions", c.directions}};
  const std::string& cmd = c.command;
  if (cmd == "descend" || cmd == "sweep") {
    j["n"] = c.n;
    j["init"] = init_to_json(c.init);
  }
  if (cmd == "descend") {
    j["step_multiple"] = c.step_multiple;
    j["max_iters"] = c.max_iters;
    if (c.grad_tol) j["grad_tol"] = *c.grad_tol;
  }
  if (cmd == "sweep") {
    j["multiples"] = c.multiples;
    j["iters"] = c.iters;
  }
  if (cmd == "perturb" || cmd == "criticality" || cmd == "cells") j["cloud"] = cloud_to_json(c.cloud);
  if (cmd == "perturb") {
    j["mode"] = c.mode;
    j["grid"] = grid_to_json(c.grid);
    j["deltas"] = c.deltas;
    j["normal"] = c.normal;
    j["envelope_c"] = c.envelope_c;
  }
  if (cmd == "criticality") j["tol"] = c.tol;
  return j;
}

namespace {

struct Context {
  RunConfig cfg;
  fs::path base;  // directory relative paths in the config resolve against
  fs::path out;
  std::size_t threads = 1;
  std::string hash;
  std::ostream* log = nullptr;

  std::string resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? p : (base / path).string();
  }
  std::string preamble(std::string_view convention) const {
    return csv_preamble(cfg.format_version, hash, convention);
  }
};

// Shell samplers and sampled directions without their own seed draw from the
// run seed (offset so the streams differ from the initialization).
ProjectedTarget build_target(const Context& ctx) {
  json spec = ctx.cfg.target;
  if (spec.value("kind", "") == "empirical") {
    if (spec.contains("sampler") && !spec.contains("seed")) spec["seed"] = ctx.cfg.seed + 2;
    if (spec.contains("path")) spec["path"] = ctx.resolve(spec["path"].get<std::string>());
  }
  try {
    return target_from_json(spec, ctx.cfg.dim);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("target: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("target: ") + e.what());
  }
}

DirectionSet build_directions(const Context& ctx) {
  const json& j = ctx.cfg.directions;
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "equispaced") {
      reject_unknown(j, {"kind", "L", "phase", "half_step"}, "directions");
      if (ctx.cfg.dim != 2) throw ConfigError("directions: equispaced needs dim = 2");
      const auto count = j.at("L").get<std::size_t>();
      double phase = j.value("phase", 0.0);
      if (j.value("half_step", false) && count > 0) phase += std::numbers::pi / static_cast<double>(count);
      return equispaced_circle(count, phase);
    }
    if (kind == "sampled") {
      reject_unknown(j, {"kind", "L", "seed"}, "directions");
      return sampled_sphere(ctx.cfg.dim, j.at("L").get<std::size_t>(), j.value("seed", ctx.cfg.seed + 1));
    }
    if (kind == "explicit") {
      reject_unknown(j, {"kind", "dirs", "weights"}, "directions");
      std::vector<double> flat;
      std::size_t count = 0;
      for (const auto& row : j.at("dirs")) {
        auto v = row.get<std::vector<double>>();
        if (v.size() != ctx.cfg.dim) throw ConfigError("directions: row length differs from dim");
        flat.insert(flat.end(), v.begin(), v.end());
        ++count;
      }
      std::vector<double> w = j.contains("weights") ? j["weights"].get<std::vector<double>>()
                                                    : std::vector<double>(count, 1.0 / static_cast<double>(count));
      return DirectionSet(ctx.cfg.dim, std::move(flat), std::move(w), DirectionSet::Kind::Explicit, 0.0);
    }
    throw ConfigError("directions: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("directions: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("directions: ") + e.what());
  }
}

PointCloud load_cloud(const Context& ctx, const std::string& path) {
  try {
    return load_cloud_csv(ctx.resolve(path), ctx.cfg.dim);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cloud file: ") + e.what());
  }
}

PointCloud build_init(const Context& ctx) {
  const auto& s = ctx.cfg.init;
  if (s.kind == "file") return load_cloud(ctx, s.path);
  if (ctx.cfg.n == 0) throw ConfigError("config: n must be positive");
  return uniform_box_cloud(ctx.cfg.n, ctx.cfg.dim, s.lo, s.hi, ctx.cfg.seed);
}

struct BuiltCloud {
  PointCloud cloud;
  std::vector<bool> mask;  // particles the perturbation field acts on; empty = all
};

BuiltCloud build_cloud(const Context& ctx, const DirectionSet& dirs) {
  const auto& s = ctx.cfg.cloud;
  if (s.kind == "file") return {load_cloud(ctx, s.path), {}};
  if (s.kind == "gaussian_line") {
    if (s.n == 0) throw ConfigError("cloud: n must be positive");
    return {gaussian_line_critical_cloud(s.n, ctx.cfg.dim, dirs), {}};
  }
  if (ctx.cfg.dim != 2) throw ConfigError("cloud: " + s.kind + " clouds are planar (dim = 2)");
  if (s.kind == "segment") {
    if (s.n < 2) throw ConfigError("cloud: segment needs n >= 2");
    return {segment_critical_cloud(s.n), {}};
  }
  auto d = dumbbell_cloud(s.segment_points, s.ring_points);
  return {std::move(d.cloud), std::move(d.on_segment)};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json separation_json(const SeparationCheck& s) {
  return {{"bound", s.bound ? json(*s.bound) : json(nullptr)},
          {"satisfied", s.satisfied},
          {"min_separation", s.min_separation}};
}

int cmd_descend(const Context& ctx) {
  const auto target = build_target(ctx);
  const auto dirs = build_directions(ctx);
  const auto x0 = build_init(ctx);
  const SlicedEvaluator eval(target, dirs, x0.size(), ctx.threads);
  DescentConfig dc;
  dc.step_multiple = ctx.cfg.step_multiple;
  dc.max_iters = ctx.cfg.max_iters;
  dc.grad_tol = ctx.cfg.grad_tol;
  if (!(dc.step_multiple > 0.0)) throw ConfigError("config: step_multiple must be positive");

  const auto res = run_descent(x0, eval, dc);
  {
    auto f = open_out(ctx.out / "trace.csv");
    res.trace.write_csv(f, ctx.preamble("energy=F=SW2^2/2"));
  }
  save_cloud_csv(res.cloud, (ctx.out / "cloud.csv").string(), ctx.preamble("coordinates"));
  const auto sep = check_separation_bound(res.cloud, target);
  const auto& last = res.trace.rows.back();
  json summary{{"format_version", ctx.cfg.format_version},
               {"config_hash", ctx.hash},
               {"n", res.cloud.size()},
               {"step", res.trace.step},
               {"steps", res.trace.steps()},
               {"stop_reason", to_string(res.trace.stop)},
               {"grad_tol", dc.tolerance(res.cloud.size())},
               {"final_energy", last.energy},
               {"final_sw2sq", 2.0 * last.energy},
               {"grad_norm", last.grad_norm},
               {"min_sep", last.min_sep},
               {"residual_max_norm", res.final_report.residual_max_norm()},
               {"separation", separation_json(sep)},
               {"barycentric_update_deviation", finite_or_null(res.trace.barycentric_update_deviation)}};
  write_json(ctx.out / "summary.json", summary);
  *ctx.log << "stop_reason=" << to_string(res.trace.stop) << " steps=" << res.trace.steps()
           << " energy=" << format_double(last.energy) << " grad_norm=" << format_double(last.grad_norm) << '\n';
  return kOk;
}

int cmd_sweep(const Context& ctx) {
  const auto target = build_target(ctx);
  const auto dirs = build_directions(ctx);
  const auto x0 = build_init(ctx);
  if (ctx.cfg.multiples.empty()) throw ConfigError("config: multiples is empty");
  for (double m : ctx.cfg.multiples)
    if (!(m > 0.0)) throw ConfigError("config: multiples must be positive");
  const SlicedEvaluator eval(target, dirs, x0.size(), ctx.threads);
  const auto table = step_size_sweep(x0, eval, ctx.cfg.multiples, ctx.cfg.iters);
  {
    auto f = open_out(ctx.out / "sweep.csv");
    table.write_csv(f, ctx.preamble("energy=F=SW2^2/2"));
  }
  json runs = json::array();
  for (std::size_t k = 0; k < table.multiples.size(); ++k) {
    const auto& t = table.traces[k];
    runs.push_back({{"step_multiple", table.multiples[k]},
                    {"stop_reason", to_string(t.stop)},
                    {"steps", t.steps()},
                    {"final_energy", t.rows.back().energy}});
  }
  write_json(ctx.out / "summary.json",
             {{"format_version", ctx.cfg.format_version}, {"config_hash", ctx.hash}, {"runs", runs}});
  return kOk;
}

std::vector<double> grid_points(const RunConfig& c) {
  if (!c.grid.ts.empty()) return c.grid.ts;
  if (c.grid.count == 0 || !(c.grid.half_width > 0.0)) throw ConfigError("grid: need count > 0 and half_width > 0");
  return symmetric_grid(c.grid.count, c.grid.half_width);
}

bool contains_zero(const std::vector<double>& ts) {
  for (double t : ts)
    if (t == 0.0) return true;
  return false;
}

int cmd_perturb(const Context& ctx) {
  const auto& c = ctx.cfg;
  const auto target = build_target(ctx);
  const auto dirs = build_directions(ctx);
  const auto built = build_cloud(ctx, dirs);
  const auto& x = built.cloud;
  const auto ts = grid_points(c);
  try {
    validate_grid(ts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (c.mode != "vector_field" && !contains_zero(ts)) throw ConfigError("grid: " + c.mode + " mode needs t = 0");
  for (double d : c.deltas)
    if (!(d > 0.0)) throw ConfigError("config: deltas must be positive");

  json summary{{"format_version", c.format_version}, {"config_hash", ctx.hash}, {"mode", c.mode}, {"n", x.size()}};
  PerturbationCurve curve;
  std::string convention = "SW2^2=2F";
  if (c.mode == "vector_field") {
    const SlicedEvaluator eval(target, dirs, x.size(), ctx.threads);
    const auto xi = alternating_field(x.size(), c.dim, built.mask);
    curve = perturb_vector_field(x, xi, ts, eval);
    summary["local_max"] = local_max_at_zero(x, xi, c.deltas, eval);
  } else if (c.mode == "split_translation") {
    if (c.dim != 2) throw ConfigError("split_translation: planar clouds only");
    if (c.normal.size() != c.dim) throw ConfigError("config: normal has wrong length");
    const double norm = std::hypot(c.normal[0], c.normal[1]);
    if (std::abs(norm - 1.0) > 1e-12) throw ConfigError("config: normal must be a unit vector");
    const SlicedEvaluator eval2(target, dirs, 2 * x.size(), ctx.threads);
    curve = perturb_split_translation(x, c.normal, ts, eval2);
    std::vector<double> probe{0.0};
    for (double d : c.deltas) {
      probe.push_back(-d);
      probe.push_back(d);
    }
    std::sort(probe.begin(), probe.end());
    probe.erase(std::unique(probe.begin(), probe.end()), probe.end());
    const auto small = perturb_split_translation(x, c.normal, probe, eval2);
    const double v0 = small.values[small.zero_index()];
    bool lm = true;
    for (std::size_t j = 0; j < probe.size(); ++j) lm = lm && (probe[j] == 0.0 || small.values[j] < v0);
    summary["local_max"] = lm;
    summary["envelope_c"] = c.envelope_c;
    summary["envelope_radius"] = instability_envelope_radius(curve, c.envelope_c);
  } else {
    const SlicedEvaluator eval(target, dirs, x.size(), ctx.threads);
    const auto xi = alternating_field(x.size(), c.dim, built.mask);
    KinkScan scan;
    try {
      scan = kink_scan(x, xi, ts, eval);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    curve = std::move(scan.curve);
    convention = "F_L=0.5*sum_l w_l W2^2";
    summary["slope_jump"] = scan.slope_jump;
    const auto z = curve.zero_index();
    bool lm = z > 0 && z + 1 < curve.values.size() && curve.values[z - 1] < curve.values[z] &&
              curve.values[z + 1] < curve.values[z];
    summary["local_max"] = lm;
  }
  if (contains_zero(ts)) summary["value_at_zero"] = curve.values[curve.zero_index()];
  {
    auto f = open_out(ctx.out / "curve.csv");
    curve.write_csv(f, ctx.preamble(convention));
  }
  write_json(ctx.out / "summary.json", summary);
  *ctx.log << "local_max=" << (summary["local_max"].get<bool>() ? "true" : "false") << '\n';
  return kOk;
}

int cmd_criticality(const Context& ctx) {
  const auto target = build_target(ctx);
  const auto dirs = build_directions(ctx);
  const auto x = build_cloud(ctx, dirs).cloud;
  const SlicedEvaluator eval(target, dirs, x.size(), ctx.threads);
  const auto rep = eval.gradient(x);
  std::vector<double> norms(x.size());
  double sum = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.dim(); ++k) s += rep.residuals[i * x.dim() + k] * rep.residuals[i * x.dim() + k];
    norms[i] = std::sqrt(s);
    sum += norms[i];
    mx = std::max(mx, norms[i]);
  }
  const double mean = x.size() ? sum / static_cast<double>(x.size()) : 0.0;
  {
    auto f = open_out(ctx.out / "residuals.csv");
    f << ctx.preamble("residual=N*grad F") << '\n' << "i,residual_norm\n";
    for (std::size_t i = 0; i < x.size(); ++i) write_csv_row(f, {static_cast<double>(i), norms[i]});
  }
  const bool critical = mx <= ctx.cfg.tol;
  write_json(ctx.out / "summary.json", {{"format_version", ctx.cfg.format_version},
                                        {"config_hash", ctx.hash},
                                        {"n", x.size()},
                                        {"energy", rep.energy},
                                        {"grad_norm", rep.grad_norm},
                                        {"residual_max", mx},
                                        {"residual_mean", mean},
                                        {"tol", ctx.cfg.tol},
                                        {"critical_at_tol", critical}});
  for (std::size_t i = 0; i < x.size(); ++i) *ctx.log << i << ' ' << format_double(norms[i]) << '\n';
  *ctx.log << "max=" << format_double(mx) << " mean=" << format_double(mean)
           << " critical_at_tol=" << (critical ? "true" : "false") << '\n';
  return kOk;
}

int cmd_cells(const Context& ctx) {
  const auto target = build_target(ctx);
  const auto dirs = build_directions(ctx);
  const auto x = build_cloud(ctx, dirs).cloud;
  const SlicedEvaluator eval(target, dirs, x.size(), ctx.threads);
  const auto cell = analyze_cell(x, eval);
  json j = cell.to_json();
  j["format_version"] = ctx.cfg.format_version;
  j["config_hash"] = ctx.hash;
  j["f_l"] = estimator_fl(x, target, dirs);
  write_json(ctx.out / "cells.json", j);
  *ctx.log << "strictly_convex=" << (cell.strictly_convex ? "true" : "false") << '\n';
  return kOk;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sliced-Wasserstein particle gradient flows"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  static const std::vector<std::pair<const char*, const char*>> commands{
      {"descend", "fixed-step gradient descent with monitored trace"},
      {"perturb", "perturbation curves around a cloud"},
      {"criticality", "criticality residual of a cloud"},
      {"sweep", "energy traces for several step sizes"},
      {"cells", "cell structure of the fixed-direction estimator"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (falls back to SWFLOW_THREADS)");
    sub->add_option("--seed", seed, "overrides the config seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Context ctx;
  ctx.log = &out;
  try {
    const json raw = read_config_file(config_path);
    ctx.cfg = config_from_json(command, raw);
    if (seed) ctx.cfg.seed = *seed;
    ctx.hash = fnv1a_hex(config_to_json(ctx.cfg).dump());
    ctx.base = fs::path(config_path).parent_path();
    ctx.out = out_dir;
    ctx.threads = resolve_threads(threads);
    set_default_threads(ctx.threads);
    fs::create_directories(ctx.out);
    if (command == "descend") return cmd_descend(ctx);
    if (command == "sweep") return cmd_sweep(ctx);
    if (command == "perturb") return cmd_perturb(ctx);
    if (command == "criticality") return cmd_criticality(ctx);
    return cmd_cells(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OnDiagonalError& e) {
    err << "error: " << e.what() << '\n';
    return kGeometryError;
  } catch (const TieInDirectionError& e) {
    err << "error: " << e.what() << '\n';
    return kGeometryError;
  } catch (const DimensionMismatch& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace swflow::cli
