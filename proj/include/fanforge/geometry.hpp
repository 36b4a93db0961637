// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_GEOMETRY_HPP
#define FANFORGE_GEOMETRY_HPP

// Raster resampling primitives shared by the geometric transforms. Images are
// resampled bilinearly, masks by nearest neighbour so label sets stay closed.
// Samples falling outside the source read as the fill value (zero).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "fanforge/core.hpp"

namespace fanforge::geometry {

/// Inverse mapping from destination pixel to source coordinates:
/// src = [a b; c d] * (dst - center) + center + offset.
struct InverseMap {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  double center_x = 0.0, center_y = 0.0;
  double offset_x = 0.0, offset_y = 0.0;

  void operator()(double x, double y, double& sx, double& sy) const noexcept {
    const double px = x - center_x;
    const double py = y - center_y;
    sx = a * px + b * py + center_x + offset_x;
    sy = c * px + d * py + center_y + offset_y;
  }
};

/// Rotation by `degrees` about the raster center; positive angles turn the
/// content counter-clockwise as displayed (y axis pointing down).
inline InverseMap rotation(std::size_t width, std::size_t height, double degrees) {
  const double theta = degrees * 3.14159265358979323846 / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  InverseMap m;
  m.a = cs;
  m.b = -sn;
  m.c = sn;
  m.d = cs;
  m.center_x = (static_cast<double>(width) - 1.0) / 2.0;
  m.center_y = (static_cast<double>(height) - 1.0) / 2.0;
  return m;
}

/// Center-anchored isotropic scaling by `factor`.
inline InverseMap scaling(std::size_t width, std::size_t height, double factor) {
  InverseMap m;
  m.a = m.d = 1.0 / factor;
  m.center_x = (static_cast<double>(width) - 1.0) / 2.0;
  m.center_y = (static_cast<double>(height) - 1.0) / 2.0;
  return m;
}

inline float sample_bilinear(const ImageBuffer& src, double sx, double sy) noexcept {
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  if (!(sx > -1.0 && sy > -1.0 && sx < static_cast<double>(w) && sy < static_cast<double>(h))) {
    return 0.0f;
  }
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  const double fx = sx - fx0;
  const double fy = sy - fy0;
  const auto x0 = static_cast<std::ptrdiff_t>(fx0);
  const auto y0 = static_cast<std::ptrdiff_t>(fy0);
  auto at = [&](std::ptrdiff_t x, std::ptrdiff_t y) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return src(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };
  const double top = at(x0, y0) * (1.0 - fx) + at(x0 + 1, y0) * fx;
  const double bottom = at(x0, y0 + 1) * (1.0 - fx) + at(x0 + 1, y0 + 1) * fx;
  return static_cast<float>(top * (1.0 - fy) + bottom * fy);
}

template <class T>
T sample_nearest(const Raster<T>& src, double sx, double sy, T fill = T{}) noexcept {
  const double rx = std::floor(sx + 0.5);
  const double ry = std::floor(sy + 0.5);
  if (rx < 0.0 || ry < 0.0 || rx >= static_cast<double>(src.width()) ||
      ry >= static_cast<double>(src.height())) {
    return fill;
  }
  return src(static_cast<std::size_t>(rx), static_cast<std::size_t>(ry));
}

inline ImageBuffer warp_bilinear(const ImageBuffer& src, const InverseMap& map) {
  ImageBuffer out(src.width(), src.height());
  for (std::size_t r = 0; r < src.height(); ++r) {
    for (std::size_t c = 0; c < src.width(); ++c) {
      double sx, sy;
      map(static_cast<double>(c), static_cast<double>(r), sx, sy);
      out(c, r) = std::clamp(sample_bilinear(src, sx, sy), 0.0f, 1.0f);
    }
  }
  return out;
}

template <class T>
Raster<T> warp_nearest(const Raster<T>& src, const InverseMap& map, T fill = T{}) {
  Raster<T> out(src.width(), src.height(), fill);
  for (std::size_t r = 0; r < src.height(); ++r) {
    for (std::size_t c = 0; c < src.width(); ++c) {
      double sx, sy;
      map(static_cast<double>(c), static_cast<double>(r), sx, sy);
      out(c, r) = sample_nearest(src, sx, sy, fill);
    }
  }
  return out;
}

template <class T>
Raster<T> flip_horizontal(const Raster<T>& src) {
  Raster<T> out(src.width(), src.height());
  for (std::size_t r = 0; r < src.height(); ++r) {
    auto in = src.row(r);
    std::reverse_copy(in.begin(), in.end(), out.row(r).begin());
  }
  return out;
}

template <class T>
Raster<T> flip_vertical(const Raster<T>& src) {
  Raster<T> out(src.width(), src.height());
  for (std::size_t r = 0; r < src.height(); ++r) {
    auto in = src.row(src.height() - 1 - r);
    std::copy(in.begin(), in.end(), out.row(r).begin());
  }
  return out;
}

/// Integer translation; positive dx moves content right, positive dy down.
template <class T>
Raster<T> shift(const Raster<T>& src, std::ptrdiff_t dx, std::ptrdiff_t dy, T fill = T{}) {
  Raster<T> out(src.width(), src.height(), fill);
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(0, dy); r < std::min(h, h + dy); ++r) {
    for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, dx); c < std::min(w, w + dx); ++c) {
      out(static_cast<std::size_t>(c), static_cast<std::size_t>(r)) =
          src(static_cast<std::size_t>(c - dx), static_cast<std::size_t>(r - dy));
    }
  }
  return out;
}

/// Bilinear resize with half-pixel centers and edge clamping.
inline ImageBuffer resize_bilinear(const ImageBuffer& src, std::size_t width, std::size_t height) {
  if (src.width() == width && src.height() == height) return src;
  ImageBuffer out(width, height);
  const double scale_x = static_cast<double>(src.width()) / static_cast<double>(width);
  const double scale_y = static_cast<double>(src.height()) / static_cast<double>(height);
  const double max_x = static_cast<double>(src.width() - 1);
  const double max_y = static_cast<double>(src.height() - 1);
  for (std::size_t r = 0; r < height; ++r) {
    const double sy = std::clamp((static_cast<double>(r) + 0.5) * scale_y - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, src.height() - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t c = 0; c < width; ++c) {
      const double sx = std::clamp((static_cast<double>(c) + 0.5) * scale_x - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, src.width() - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = src(x0, y0) * (1.0 - fx) + src(x1, y0) * fx;
      const double bottom = src(x0, y1) * (1.0 - fx) + src(x1, y1) * fx;
      out(c, r) = std::clamp(static_cast<float>(top * (1.0 - fy) + bottom * fy), 0.0f, 1.0f);
    }
  }
  return out;
}

template <class T>
Raster<T> resize_nearest(const Raster<T>& src, std::size_t width, std::size_t height) {
  if (src.width() == width && src.height() == height) return src;
  Raster<T> out(width, height);
  const double scale_x = static_cast<double>(src.width()) / static_cast<double>(width);
  const double scale_y = static_cast<double>(src.height()) / static_cast<double>(height);
  for (std::size_t r = 0; r < height; ++r) {
    const auto sy = std::min(static_cast<std::size_t>((static_cast<double>(r) + 0.5) * scale_y),
                             src.height() - 1);
    for (std::size_t c = 0; c < width; ++c) {
      const auto sx = std::min(static_cast<std::size_t>((static_cast<double>(c) + 0.5) * scale_x),
                               src.width() - 1);
      out(c, r) = src(sx, sy);
    }
  }
  return out;
}

/// Places `src` at (left, top) inside a width x height canvas of `fill`.
template <class T>
Raster<T> pad(const Raster<T>& src, std::size_t width, std::size_t height, std::size_t left,
              std::size_t top, T fill = T{}) {
  Raster<T> out(width, height, fill);
  for (std::size_t r = 0; r < src.height(); ++r) {
    auto in = src.row(r);
    std::copy(in.begin(), in.end(), out.row(r + top).begin() + static_cast<std::ptrdiff_t>(left));
  }
  return out;
}

template <class T>
Raster<T> crop(const Raster<T>& src, std::size_t left, std::size_t top, std::size_t width,
               std::size_t height) {
  Raster<T> out(width, height);
  for (std::size_t r = 0; r < height; ++r) {
    auto in = src.row(r + top).subspan(left, width);
    std::copy(in.begin(), in.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace fanforge::geometry

#endif  // FANFORGE_GEOMETRY_HPP
