// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_STDAUG_HPP
#define FANFORGE_STDAUG_HPP

// General-purpose augmentations and input preprocessing. Geometric transforms
// apply one parameter draw to the image and to every mask present on the
// sample; photometric transforms touch the image only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>

#include "fanforge/core.hpp"
#include "fanforge/geometry.hpp"
#include "fanforge/random.hpp"

namespace fanforge {

inline constexpr std::size_t kModelSize = 224;
inline constexpr std::size_t kCropSourceSize = 256;

namespace detail {

template <class ImageFn, class MaskFn>
Sample co_transform(Sample sample, ImageFn&& image_fn, MaskFn&& mask_fn) {
  sample.image = image_fn(sample.image);
  if (sample.scan_mask) sample.scan_mask = mask_fn(*sample.scan_mask);
  if (sample.label_mask) sample.label_mask->ids = mask_fn(sample.label_mask->ids);
  return sample;
}

template <class Fn>
Sample map_intensities(Sample sample, Fn&& fn) {
  for (float& v : sample.image.values()) v = fn(v);
  return sample;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

/// Target shape of the aspect-preserving resize: the longest edge becomes
/// `target`, the other edge is rounded to the nearest pixel (at least 1).
inline std::pair<std::size_t, std::size_t> fit_longest_edge(std::size_t width, std::size_t height,
                                                            std::size_t target = kModelSize) {
  if (width >= height) {
    const double scaled = static_cast<double>(height) * static_cast<double>(target) /
                          static_cast<double>(width);
    return {target, std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(scaled)))};
  }
  const double scaled =
      static_cast<double>(width) * static_cast<double>(target) / static_cast<double>(height);
  return {std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(scaled))), target};
}

/// Resize to width x height, bilinear for the image and nearest for masks.
inline Sample resize(Sample sample, std::size_t width, std::size_t height) {
  return detail::co_transform(
      std::move(sample),
      [&](const ImageBuffer& img) { return geometry::resize_bilinear(img, width, height); },
      [&](const auto& mask) { return geometry::resize_nearest(mask, width, height); });
}

/// crop_mode = false: aspect-preserving resize so the longest edge is 224,
/// then symmetric zero padding to 224x224 (odd remainders go bottom/right).
/// crop_mode = true: plain resize to 256x256 ahead of a random 224 crop.
inline Sample preprocess(Sample sample, bool crop_mode) {
  validate(sample);
  if (crop_mode) return resize(std::move(sample), kCropSourceSize, kCropSourceSize);

  const auto [w, h] = fit_longest_edge(sample.image.width(), sample.image.height());
  sample = resize(std::move(sample), w, h);
  if (w == kModelSize && h == kModelSize) return sample;
  const std::size_t left = (kModelSize - w) / 2;
  const std::size_t top = (kModelSize - h) / 2;
  return detail::co_transform(
      std::move(sample),
      [&](const ImageBuffer& img) {
        return geometry::pad(img, kModelSize, kModelSize, left, top, 0.0f);
      },
      [&](const auto& mask) {
        return geometry::pad(mask, kModelSize, kModelSize, left, top,
                             typename std::decay_t<decltype(mask)>::value_type{0});
      });
}

// ---------------------------------------------------------------------------
// Geometric
// ---------------------------------------------------------------------------

enum class FlipAxis { Horizontal, Vertical };

/// Horizontal mirrors about the vertical centerline, vertical about the
/// horizontal one.
inline Sample flip(Sample sample, FlipAxis axis) {
  if (axis == FlipAxis::Horizontal) {
    return detail::co_transform(
        std::move(sample), [](const auto& r) { return geometry::flip_horizontal(r); },
        [](const auto& r) { return geometry::flip_horizontal(r); });
  }
  return detail::co_transform(
      std::move(sample), [](const auto& r) { return geometry::flip_vertical(r); },
      [](const auto& r) { return geometry::flip_vertical(r); });
}

inline Sample rotate(Sample sample, double degrees) {
  const auto map = geometry::rotation(sample.image.width(), sample.image.height(), degrees);
  return detail::co_transform(
      std::move(sample), [&](const ImageBuffer& img) { return geometry::warp_bilinear(img, map); },
      [&](const auto& mask) { return geometry::warp_nearest(mask, map); });
}

/// Pixel offset for a fractional shift, rounded half away from zero.
inline std::ptrdiff_t shift_pixels(double fraction, std::size_t extent) noexcept {
  return static_cast<std::ptrdiff_t>(std::lround(fraction * static_cast<double>(extent)));
}

inline Sample translate(Sample sample, double shift_x, double shift_y) {
  const auto dx = shift_pixels(shift_x, sample.image.width());
  const auto dy = shift_pixels(shift_y, sample.image.height());
  return detail::co_transform(
      std::move(sample), [&](const auto& r) { return geometry::shift(r, dx, dy); },
      [&](const auto& r) { return geometry::shift(r, dx, dy); });
}

/// Center-anchored scaling by (1 + scale_delta); shrinking leaves a zero
/// border.
inline Sample zoom(Sample sample, double scale_delta) {
  if (!(scale_delta > -1.0)) {
    throw Error(ErrorCode::InvalidArgument, "zoom needs scale_delta > -1", sample.id);
  }
  const auto map =
      geometry::scaling(sample.image.width(), sample.image.height(), 1.0 + scale_delta);
  return detail::co_transform(
      std::move(sample), [&](const ImageBuffer& img) { return geometry::warp_bilinear(img, map); },
      [&](const auto& mask) { return geometry::warp_nearest(mask, map); });
}

inline Sample crop(Sample sample, std::size_t left, std::size_t top, std::size_t width,
                   std::size_t height) {
  if (left + width > sample.image.width() || top + height > sample.image.height()) {
    throw Error(ErrorCode::ShapeMismatch, "crop window exceeds the image", sample.id);
  }
  return detail::co_transform(
      std::move(sample), [&](const auto& r) { return geometry::crop(r, left, top, width, height); },
      [&](const auto& r) { return geometry::crop(r, left, top, width, height); });
}

/// 224x224 window at a uniform origin in {0..32}^2 (column drawn first).
inline Sample random_crop(Sample sample, Rng& rng) {
  if (sample.image.width() != kCropSourceSize || sample.image.height() != kCropSourceSize) {
    throw Error(ErrorCode::ShapeMismatch, "random crop expects a 256x256 input", sample.id);
  }
  constexpr std::size_t slack = kCropSourceSize - kModelSize;
  const auto left = static_cast<std::size_t>(rng.below(slack + 1));
  const auto top = static_cast<std::size_t>(rng.below(slack + 1));
  return crop(std::move(sample), left, top, kModelSize, kModelSize);
}

inline Sample center_crop(Sample sample, std::size_t size = kModelSize) {
  const std::size_t left = (sample.image.width() - size) / 2;
  const std::size_t top = (sample.image.height() - size) / 2;
  return crop(std::move(sample), left, top, size, size);
}

// ---------------------------------------------------------------------------
// Photometric
// ---------------------------------------------------------------------------

/// out = clamp(in + beta, 0, 1).
inline Sample adjust_brightness(Sample sample, double beta) {
  const auto b = static_cast<float>(beta);
  return detail::map_intensities(std::move(sample),
                                 [b](float v) { return std::clamp(v + b, 0.0f, 1.0f); });
}

/// out = clamp(0.5 + (1 + alpha)(in - 0.5), 0, 1).
inline Sample adjust_contrast(Sample sample, double alpha) {
  const double gain = 1.0 + alpha;
  return detail::map_intensities(std::move(sample), [gain](float v) {
    return static_cast<float>(std::clamp(0.5 + gain * (static_cast<double>(v) - 0.5), 0.0, 1.0));
  });
}

/// out = in^gamma.
inline Sample adjust_gamma(Sample sample, double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive", sample.id);
  }
  return detail::map_intensities(std::move(sample), [gamma](float v) {
    return static_cast<float>(std::pow(static_cast<double>(v), gamma));
  });
}

/// Adds i.i.d. N(0, sigma^2) noise per pixel (row-major draws), clamped to
/// [0, 1].
inline Sample gaussian_noise(Sample sample, double sigma, Rng& rng) {
  return detail::map_intensities(std::move(sample), [sigma, &rng](float v) {
    return static_cast<float>(std::clamp(v + sigma * rng.normal(), 0.0, 1.0));
  });
}

// ---------------------------------------------------------------------------
// Sampling ranges
// ---------------------------------------------------------------------------

struct RotateRanges {
  Interval angle{-30.0, 30.0};
};
struct TranslateRanges {
  Interval shift_x{-0.0625, 0.0625};
  Interval shift_y{-0.0625, 0.0625};
};
struct ZoomRanges {
  Interval scale{-0.1, 0.1};
};
struct BrightnessRanges {
  Interval beta{-0.2, 0.2};
};
struct ContrastRanges {
  Interval alpha{-0.2, 0.2};
};
struct GammaRanges {
  Interval gamma{0.8, 1.2};
};
/// Noise is specified by its variance; 0.0225 gives sigma = 0.15.
struct NoiseRanges {
  Interval variance{0.0225, 0.0225};
};

}  // namespace fanforge

#endif  // FANFORGE_STDAUG_HPP
