#include "swflow/directions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace swflow {

DirectionSet::DirectionSet(std::size_t dim, std::vector<double> dirs, std::vector<double> weights,
                           Kind kind, double phase_or_seed)
    : dim_(dim),
      dirs_(std::move(dirs)),
      weights_(std::move(weights)),
      kind_(kind),
      phase_or_seed_(phase_or_seed) {
  if (dim_ < 2) throw std::invalid_argument("DirectionSet: dim must be >= 2");
  if (weights_.empty()) throw std::invalid_argument("DirectionSet: need at least one direction");
  if (dirs_.size() != dim_ * weights_.size())
    throw std::invalid_argument("DirectionSet: direction array does not match weight count");
  double wsum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("DirectionSet: weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("DirectionSet: weights must sum to 1");
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    double nrm = 0.0;
    for (double v : direction(l)) nrm += v * v;
    if (std::abs(std::sqrt(nrm) - 1.0) > 1e-12) throw std::invalid_argument("DirectionSet: directions must be unit");
  }
}

std::vector<double> DirectionSet::second_moment() const {
  std::vector<double> m(dim_ * dim_, 0.0);
  for (std::size_t l = 0; l < size(); ++l) {
    const auto th = direction(l);
    const double w = weights_[l];
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b) m[a * dim_ + b] += w * th[a] * th[b];
  }
  return m;
}

nlohmann::json DirectionSet::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l = 0; l < size(); ++l) {
    const auto th = direction(l);
    rows.push_back(std::vector<double>(th.begin(), th.end()));
  }
  const char* kind = kind_ == Kind::Equispaced ? "equispaced"
                     : kind_ == Kind::Sampled  ? "sampled"
                                               : "explicit";
  return {{"dim", dim_},
          {"kind", kind},
          {"phase_or_seed", phase_or_seed_},
          {"dirs", std::move(rows)},
          {"weights", weights_}};
}

DirectionSet DirectionSet::from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<double> flat;
  for (const auto& row : j.at("dirs")) {
    auto v = row.get<std::vector<double>>();
    if (v.size() != dim) throw std::invalid_argument("DirectionSet JSON: row has wrong length");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  auto weights = j.at("weights").get<std::vector<double>>();
  Kind kind = Kind::Explicit;
  if (j.contains("kind")) {
    const auto k = j["kind"].get<std::string>();
    if (k == "equispaced") kind = Kind::Equispaced;
    if (k == "sampled") kind = Kind::Sampled;
  }
  const double tag = j.value("phase_or_seed", 0.0);
  return DirectionSet(dim, std::move(flat), std::move(weights), kind, tag);
}

namespace {

// cos/sin of 2 pi * turns, exact when turns is a multiple of 1/4.
void unit_from_turns(double turns, double& c, double& s) {
  double r = turns - std::floor(turns);
  const double q = 4.0 * r;
  if (q == std::floor(q)) {
    static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    const auto idx = static_cast<int>(q) & 3;
    c = kCos[idx];
    s = kSin[idx];
    return;
  }
  const double angle = 2.0 * std::numbers::pi * r;
  c = std::cos(angle);
  s = std::sin(angle);
}

}  // namespace

DirectionSet equispaced_circle(std::size_t count, double phase) {
  if (count == 0) throw std::invalid_argument("equispaced_circle: L must be >= 1");
  std::vector<double> dirs(2 * count);
  const double phase_turns = phase / (2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < count; ++k) {
    const double turns = phase_turns + static_cast<double>(k) / static_cast<double>(count);
    unit_from_turns(turns, dirs[2 * k], dirs[2 * k + 1]);
  }
  std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  return DirectionSet(2, std::move(dirs), std::move(weights), DirectionSet::Kind::Equispaced, phase);
}

DirectionSet sampled_sphere(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("sampled_sphere: dim must be >= 2");
  if (count == 0) throw std::invalid_argument("sampled_sphere: L must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> dirs(dim * count);
  for (std::size_t l = 0; l < count; ++l) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double g = gauss(rng);
        dirs[l * dim + k] = g;
        norm2 += g * g;
      }
    } while (norm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < dim; ++k) dirs[l * dim + k] *= inv;
  }
  std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  return DirectionSet(dim, std::move(dirs), std::move(weights), DirectionSet::Kind::Sampled,
                      static_cast<double>(seed));
}

}  // namespace swflow
