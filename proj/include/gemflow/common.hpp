#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace gemflow {

using Vec2 = Eigen::Vector2d;

/// Error type for invalid input, failed validation and geometry/tracking
/// failures. Internal consistency violations use assert instead.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A source or sink supported on a single mesh cell, with uniform density
/// rate/|cell| inside it. `rate` is the total volumetric rate (area per day
/// in 2D) and is positive for both kinds; `sign` is +1 for injection, -1 for
/// production.
struct Well {
  int cell = -1;
  Vec2 center{0.0, 0.0};
  double rate = 0.0;
  int sign = +1;

  bool injector() const { return sign > 0; }
};

using Wells = std::vector<Well>;

} // namespace gemflow
