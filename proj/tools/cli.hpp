#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace swflow::cli {

inline constexpr int kFormatVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 2, kGeometryError = 3 };

struct InitSpec {
  std::string kind = "uniform_box";  // uniform_box | file
  double lo = -1.0;
  double hi = 1.0;
  std::string path;
  bool operator==(const InitSpec&) const = default;
};

struct CloudSpec {
  std::string kind = "segment";  // segment | dumbbell | gaussian_line | file
  std::size_t n = 100;
  std::size_t segment_points = 50;
  std::size_t ring_points = 25;
  std::string path;
  bool operator==(const CloudSpec&) const = default;
};

struct GridSpec {
  std::size_t count = 201;
  double half_width = 0.5;
  std::vector<double> ts;  // explicit grid overrides count/half_width
  bool operator==(const GridSpec&) const = default;
};

/// Parameters of one CLI run. Which fields are meaningful depends on the
/// command; to_json emits exactly those and from_json rejects any other key.
struct RunConfig {
  std::string command;
  int format_version = kFormatVersion;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  nlohmann::json target = {{"kind", "sliced_uniform_disk"}};
  nlohmann::json directions = {{"kind", "equispaced"}, {"L", 100}, {"phase", 0.0}};

  // descend, sweep
  std::size_t n = 1000;
  InitSpec init;
  double step_multiple = 2.0;
  std::size_t max_iters = 200;
  std::optional<double> grad_tol;
  std::vector<double> multiples{0.5, 1.0, 2.0, 4.0};
  std::size_t iters = 200;

  // perturb, criticality, cells
  std::string mode = "vector_field";  // vector_field | split_translation | kink
  CloudSpec cloud;
  GridSpec grid;
  std::vector<double> deltas{0.01, 0.02, 0.05};
  std::vector<double> normal{0.0, 1.0};
  double envelope_c = 100.0;
  double tol = 1e-2;

  bool operator==(const RunConfig&) const = default;
};

RunConfig config_from_json(const std::string& command, const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swflow::cli
