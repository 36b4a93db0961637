// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_SCANMASK_HPP
#define FANFORGE_SCANMASK_HPP

// Approximate scan-region extraction for B-mode frames:
//   threshold -> disk closing -> largest 4-connected component -> hole fill.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fanforge/core.hpp"

namespace fanforge {

struct MaskGenParams {
  double intensity_threshold = 4.0 / 255.0;
  int closing_radius = 5;
  bool fill_holes = true;
  bool keep_largest_component = true;
};

namespace morph {

/// True where any `active` pixel lies inside the disk of `radius` centred on
/// the pixel. Pixels outside the raster never count as active.
inline ScanMask disk_any(const ScanMask& in, std::uint8_t active, int radius) {
  const std::size_t w = in.width();
  const std::size_t h = in.height();
  // prefix[r][c] = number of active pixels in row r, columns [0, c).
  std::vector<std::uint32_t> prefix((w + 1) * h, 0);
  for (std::size_t r = 0; r < h; ++r) {
    auto row = in.row(r);
    std::uint32_t* p = &prefix[r * (w + 1)];
    for (std::size_t c = 0; c < w; ++c) p[c + 1] = p[c] + (row[c] == active ? 1u : 0u);
  }
  std::vector<int> half_width(static_cast<std::size_t>(2 * radius + 1));
  for (int dy = -radius; dy <= radius; ++dy) {
    half_width[static_cast<std::size_t>(dy + radius)] =
        static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius * radius - dy * dy))));
  }

  ScanMask out(w, h, 0);
  const auto iw = static_cast<std::ptrdiff_t>(w);
  const auto ih = static_cast<std::ptrdiff_t>(h);
  for (std::ptrdiff_t r = 0; r < ih; ++r) {
    for (std::ptrdiff_t c = 0; c < iw; ++c) {
      bool hit = false;
      for (int dy = -radius; dy <= radius && !hit; ++dy) {
        const std::ptrdiff_t rr = r + dy;
        if (rr < 0 || rr >= ih) continue;
        const int hw = half_width[static_cast<std::size_t>(dy + radius)];
        const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, c - hw));
        const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(iw, c + hw + 1));
        const std::uint32_t* p = &prefix[static_cast<std::size_t>(rr) * (w + 1)];
        hit = p[hi] > p[lo];
      }
      out(static_cast<std::size_t>(c), static_cast<std::size_t>(r)) = hit ? 1 : 0;
    }
  }
  return out;
}

inline ScanMask dilate(const ScanMask& in, int radius) { return disk_any(in, 1, radius); }

/// Erosion with the exterior treated as foreground, so content touching the
/// raster edge is not eaten away.
inline ScanMask erode(const ScanMask& in, int radius) {
  ScanMask out = disk_any(in, 0, radius);
  for (auto& v : out.values()) v = v ? 0 : 1;
  return out;
}

/// Dilation followed by erosion; the result is a superset of the input.
inline ScanMask close(const ScanMask& in, int radius) { return erode(dilate(in, radius), radius); }

/// 4-connected labelling of foreground pixels. Labels start at 1 in raster
/// order of each component's first pixel; background stays 0.
inline std::vector<std::int32_t> label_components(const ScanMask& in, std::int32_t& count) {
  const std::size_t w = in.width();
  const std::size_t h = in.height();
  std::vector<std::int32_t> labels(w * h, 0);
  std::vector<std::size_t> stack;
  count = 0;
  const auto values = in.values();
  for (std::size_t start = 0; start < w * h; ++start) {
    if (values[start] == 0 || labels[start] != 0) continue;
    ++count;
    labels[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const std::size_t r = i / w;
      const std::size_t c = i % w;
      auto visit = [&](std::size_t j) {
        if (values[j] != 0 && labels[j] == 0) {
          labels[j] = count;
          stack.push_back(j);
        }
      };
      if (c > 0) visit(i - 1);
      if (c + 1 < w) visit(i + 1);
      if (r > 0) visit(i - w);
      if (r + 1 < h) visit(i + w);
    }
  }
  return labels;
}

/// Keeps the component with the most pixels; ties go to the lowest label.
inline ScanMask largest_component(const ScanMask& in) {
  std::int32_t count = 0;
  const auto labels = label_components(in, count);
  if (count <= 1) return in;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count) + 1, 0);
  for (auto l : labels) ++sizes[static_cast<std::size_t>(l)];
  std::int32_t best = 1;
  for (std::int32_t l = 2; l <= count; ++l) {
    if (sizes[static_cast<std::size_t>(l)] > sizes[static_cast<std::size_t>(best)]) best = l;
  }
  ScanMask out(in.width(), in.height(), 0);
  auto dst = out.values();
  for (std::size_t i = 0; i < labels.size(); ++i) dst[i] = labels[i] == best ? 1 : 0;
  return out;
}

/// Sets every background pixel not 4-connected to the raster border.
inline ScanMask fill_holes(const ScanMask& in) {
  const std::size_t w = in.width();
  const std::size_t h = in.height();
  const auto values = in.values();
  std::vector<std::uint8_t> outside(w * h, 0);
  std::vector<std::size_t> stack;
  auto seed = [&](std::size_t i) {
    if (values[i] == 0 && !outside[i]) {
      outside[i] = 1;
      stack.push_back(i);
    }
  };
  for (std::size_t c = 0; c < w; ++c) {
    seed(c);
    seed((h - 1) * w + c);
  }
  for (std::size_t r = 0; r < h; ++r) {
    seed(r * w);
    seed(r * w + w - 1);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const std::size_t r = i / w;
    const std::size_t c = i % w;
    if (c > 0) seed(i - 1);
    if (c + 1 < w) seed(i + 1);
    if (r > 0) seed(i - w);
    if (r + 1 < h) seed(i + w);
  }
  ScanMask out(w, h, 0);
  auto dst = out.values();
  for (std::size_t i = 0; i < w * h; ++i) dst[i] = outside[i] ? 0 : 1;
  return out;
}

}  // namespace morph

/// Approximate fan mask of a B-mode frame. Throws EmptyMask when no pixel
/// exceeds the threshold.
inline ScanMask generate_scan_mask(const ImageBuffer& image, const MaskGenParams& params = {}) {
  if (image.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "cannot build a scan mask for an empty image");
  }
  if (!(params.intensity_threshold > 0.0 && params.intensity_threshold < 1.0) ||
      params.closing_radius < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "mask generation needs threshold in (0,1) and closing radius >= 1");
  }
  ScanMask mask(image.width(), image.height(), 0);
  const auto t = static_cast<float>(params.intensity_threshold);
  bool any = false;
  std::transform(image.values().begin(), image.values().end(), mask.values().begin(),
                 [&](float v) {
                   const bool on = v > t;
                   any = any || on;
                   return static_cast<std::uint8_t>(on ? 1 : 0);
                 });
  if (!any) throw Error(ErrorCode::EmptyMask, "no pixel exceeds the intensity threshold");

  mask = morph::close(mask, params.closing_radius);
  if (params.keep_largest_component) mask = morph::largest_component(mask);
  if (params.fill_holes) mask = morph::fill_holes(mask);
  return mask;
}

}  // namespace fanforge

#endif  // FANFORGE_SCANMASK_HPP
