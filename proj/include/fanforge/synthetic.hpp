// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_SYNTHETIC_HPP
#define FANFORGE_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include "fanforge/core.hpp"
#include "fanforge/random.hpp"

namespace fanforge {

/// Circular sector with its apex at the top-center pixel, opening downward.
struct FanGeometry {
  double radius_fraction = 0.92;  // of image height
  double half_angle_deg = 38.0;   // from the vertical

  /// True when pixel (col, row) lies inside the sector.
  bool contains(std::size_t col, std::size_t row, std::size_t width, std::size_t height) const {
    const double apex_x = (static_cast<double>(width) - 1.0) / 2.0;
    const double dx = static_cast<double>(col) - apex_x;
    const double dy = static_cast<double>(row);
    const double radius = radius_fraction * static_cast<double>(height);
    if (dx * dx + dy * dy > radius * radius) return false;
    const double angle = std::atan2(std::abs(dx), dy) * 180.0 / 3.14159265358979323846;
    return angle <= half_angle_deg;
  }
};

/// Speckled B-mode-like frame: textured intensities inside a fan, black
/// outside, with the analytic fan as scan mask. Used for demos, benchmarks
/// and tests.
inline Sample make_synthetic_fan(std::size_t width, std::size_t height, std::uint64_t seed,
                                 const FanGeometry& fan = {}) {
  Sample s;
  s.id = "synthetic_" + std::to_string(seed);
  s.seed = seed;
  s.image = ImageBuffer(width, height, 0.0f);
  ScanMask mask(width, height, 0);
  Rng rng(seed);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (!fan.contains(c, r, width, height)) continue;
      mask(c, r) = 1;
      const double depth = static_cast<double>(r) / static_cast<double>(height);
      const double texture = 0.45 + 0.25 * std::sin(0.11 * static_cast<double>(c)) *
                                        std::cos(0.07 * static_cast<double>(r));
      const double speckle = 0.35 * (rng.uniform() - 0.5);
      s.image(c, r) = static_cast<float>(std::clamp(texture * (1.0 - 0.3 * depth) + speckle, 0.05, 1.0));
    }
  }
  s.scan_mask = std::move(mask);
  return s;
}

}  // namespace fanforge

#endif  // FANFORGE_SYNTHETIC_HPP
