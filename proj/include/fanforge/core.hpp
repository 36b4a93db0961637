// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_CORE_HPP
#define FANFORGE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fanforge/error.hpp"

namespace fanforge {

/// Row-major single-channel raster.
template <class T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}
  Raster(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
      throw Error(ErrorCode::ShapeMismatch, "raster data length " +
                                                std::to_string(data_.size()) +
                                                " != width*height");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t col, std::size_t row) { return data_[row * width_ + col]; }
  const T& operator()(std::size_t col, std::size_t row) const {
    return data_[row * width_ + col];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * width_, width_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * width_, width_};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  template <class U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Normalized intensities in [0, 1].
using ImageBuffer = Raster<float>;

/// Binary {0, 1} region holding real ultrasound signal.
using ScanMask = Raster<std::uint8_t>;

/// Integer class ids for segmentation targets; every id < num_classes.
struct LabelMask {
  Raster<std::uint8_t> ids;
  int num_classes = 1;

  friend bool operator==(const LabelMask&, const LabelMask&) = default;
};

/// The unit flowing through every transform.
struct Sample {
  std::string id;
  ImageBuffer image;
  std::optional<ScanMask> scan_mask;
  std::optional<LabelMask> label_mask;
  std::optional<int> label;
  std::uint64_t seed = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Closed sampling range; `sample` draws uniformly from [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  template <class Rng>
  double sample(Rng& rng) const {
    return lo == hi ? lo : rng.uniform(lo, hi);
  }
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  bool within(double min_allowed, double max_allowed) const noexcept {
    return lo <= hi && lo >= min_allowed && hi <= max_allowed;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Position as a fraction of image width (x) and height (y). The probe apex
/// sits at (0.5, 0).
struct NormalizedPoint {
  double x = 0.5;
  double y = 0.0;
};

/// Distance from the probe apex in normalized units, range [0, sqrt(1.25)].
inline double radial_distance(NormalizedPoint p) noexcept {
  const double dx = p.x - 0.5;
  return std::sqrt(dx * dx + p.y * p.y);
}

/// Maps pixel indices onto [0, 1] so that the first and last column/row hit 0
/// and 1 exactly. A single-pixel axis maps to the apex position (0.5 for x,
/// 0 for y).
class PixelGrid {
 public:
  PixelGrid(std::size_t width, std::size_t height)
      : x_scale_(width > 1 ? 1.0 / static_cast<double>(width - 1) : 0.0),
        y_scale_(height > 1 ? 1.0 / static_cast<double>(height - 1) : 0.0),
        single_column_(width == 1) {}

  double x(std::size_t col) const noexcept {
    return single_column_ ? 0.5 : static_cast<double>(col) * x_scale_;
  }
  double y(std::size_t row) const noexcept { return static_cast<double>(row) * y_scale_; }
  NormalizedPoint at(std::size_t col, std::size_t row) const noexcept {
    return {x(col), y(row)};
  }

 private:
  double x_scale_;
  double y_scale_;
  bool single_column_;
};

/// raw / 255, shape preserved.
inline ImageBuffer normalize_u8(const Raster<std::uint8_t>& raw) {
  ImageBuffer out(raw.width(), raw.height());
  std::transform(raw.values().begin(), raw.values().end(), out.values().begin(),
                 [](std::uint8_t v) { return static_cast<float>(v) / 255.0f; });
  return out;
}

/// Nearest 8-bit code for an intensity, clamped to [0, 255].
inline std::uint8_t quantize_u8(float v) noexcept {
  const float scaled = std::clamp(v, 0.0f, 1.0f) * 255.0f;
  return static_cast<std::uint8_t>(std::lround(scaled));
}

inline Raster<std::uint8_t> quantize_u8(const ImageBuffer& image) {
  Raster<std::uint8_t> out(image.width(), image.height());
  std::transform(image.values().begin(), image.values().end(), out.values().begin(),
                 [](float v) { return quantize_u8(v); });
  return out;
}

/// ITU-R BT.601 luma of an 8-bit RGB triple, rounded to the nearest code.
inline std::uint8_t luminance_bt601(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::lround(std::clamp(y, 0.0, 255.0)));
}

inline bool intensities_valid(const ImageBuffer& image) noexcept {
  return std::all_of(image.values().begin(), image.values().end(),
                     [](float v) { return v >= 0.0f && v <= 1.0f; });
}

inline bool is_binary(const ScanMask& mask) noexcept {
  return std::all_of(mask.values().begin(), mask.values().end(),
                     [](std::uint8_t v) { return v <= 1; });
}

/// Throws ShapeMismatch unless every raster present in the sample shares the
/// image shape, and InvalidArgument when a mask violates its value domain.
inline void validate(const Sample& sample) {
  if (sample.image.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "sample image is empty", sample.id);
  }
  if (sample.scan_mask) {
    if (!sample.scan_mask->same_shape(sample.image)) {
      throw Error(ErrorCode::ShapeMismatch, "scan mask shape differs from image", sample.id);
    }
    if (!is_binary(*sample.scan_mask)) {
      throw Error(ErrorCode::InvalidArgument, "scan mask is not binary", sample.id);
    }
  }
  if (sample.label_mask) {
    const auto& lm = *sample.label_mask;
    if (!lm.ids.same_shape(sample.image)) {
      throw Error(ErrorCode::ShapeMismatch, "label mask shape differs from image", sample.id);
    }
    for (auto v : lm.ids.values()) {
      if (static_cast<int>(v) >= lm.num_classes) {
        throw Error(ErrorCode::InvalidArgument, "label id >= num_classes", sample.id);
      }
    }
  }
}

inline const ScanMask& require_scan_mask(const Sample& sample) {
  if (!sample.scan_mask) {
    throw Error(ErrorCode::MissingScanMask, "transform needs a scan mask", sample.id);
  }
  if (!sample.scan_mask->same_shape(sample.image)) {
    throw Error(ErrorCode::ShapeMismatch, "scan mask shape differs from image", sample.id);
  }
  return *sample.scan_mask;
}

}  // namespace fanforge

#endif  // FANFORGE_CORE_HPP
