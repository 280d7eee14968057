#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swflow {

// Two particles coincide; the SW energy is not differentiable there.
class OnDiagonalError : public std::runtime_error {
 public:
  OnDiagonalError(std::size_t i, std::size_t j)
      : std::runtime_error("point cloud lies on the generalized diagonal: particles " +
                           std::to_string(i) + " and " + std::to_string(j) + " coincide"),
        first(i),
        second(j) {}

  std::size_t first;
  std::size_t second;
};

// Two particles share a projection along a fixed direction, so the sorting
// permutation for that direction is not unique.
class TieInDirectionError : public std::runtime_error {
 public:
  explicit TieInDirectionError(std::size_t l)
      : std::runtime_error("projection tie along direction " + std::to_string(l)), direction(l) {}

  std::size_t direction;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : std::invalid_argument(what + ": expected dimension " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

}  // namespace swflow
