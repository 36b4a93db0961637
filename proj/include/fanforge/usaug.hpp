// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_USAUG_HPP
#define FANFORGE_USAUG_HPP

// Ultrasound-specific augmentations: radial depth attenuation, acoustic haze,
// Gaussian acoustic shadow and bilateral speckle reduction.
//
// The radial transforms use the probe-centric normalized frame of PixelGrid:
// the apex is at (0.5, 0) and the far corners at normalized distance
// sqrt(1.25). Pixels outside the scan mask are zeroed by the attenuation and
// shadow transforms unless `preserve_background` is set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fanforge/core.hpp"
#include "fanforge/random.hpp"

namespace fanforge {

// ---------------------------------------------------------------------------
// Depth attenuation
// ---------------------------------------------------------------------------

struct DepthAttenuationParams {
  double max_attenuation = 0.0;   // lambda, in [0, 1]
  double attenuation_rate = 0.0;  // mu, >= 0
  bool preserve_background = false;
};

struct DepthAttenuationRanges {
  Interval max_attenuation{0.0, 0.0};
  Interval attenuation_rate{0.0, 3.0};

  DepthAttenuationParams sample(Rng& rng) const {
    DepthAttenuationParams p;
    p.max_attenuation = max_attenuation.sample(rng);
    p.attenuation_rate = attenuation_rate.sample(rng);
    return p;
  }
};

/// A(d) = (1 - lambda) exp(-mu d) + lambda.
inline double attenuation_factor(double d, const DepthAttenuationParams& p) noexcept {
  return (1.0 - p.max_attenuation) * std::exp(-p.attenuation_rate * d) + p.max_attenuation;
}

inline void check(const DepthAttenuationParams& p) {
  if (!(p.max_attenuation >= 0.0 && p.max_attenuation <= 1.0) || !(p.attenuation_rate >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "depth attenuation needs 0<=lambda<=1 and mu>=0");
  }
}

/// out = A * S * I.
inline Sample depth_attenuation(Sample sample, const DepthAttenuationParams& params) {
  const ScanMask& mask = require_scan_mask(sample);
  check(params);
  ImageBuffer& image = sample.image;
  const PixelGrid grid(image.width(), image.height());
  for (std::size_t r = 0; r < image.height(); ++r) {
    auto px = image.row(r);
    auto s = mask.row(r);
    const double y = grid.y(r);
    for (std::size_t c = 0; c < image.width(); ++c) {
      if (s[c] == 0) {
        if (!params.preserve_background) px[c] = 0.0f;
        continue;
      }
      const double a = attenuation_factor(radial_distance({grid.x(c), y}), params);
      px[c] = static_cast<float>(std::clamp(a * px[c], 0.0, 1.0));
    }
  }
  return sample;
}

// ---------------------------------------------------------------------------
// Haze artifact
// ---------------------------------------------------------------------------

struct HazeParams {
  double radius = 0.5;  // normalized distance from the apex
  double sigma = 0.05;  // spread of the band, normalized distance
};

struct HazeRanges {
  Interval radius{0.05, 0.95};
  Interval sigma{0.0, 0.1};

  HazeParams sample(Rng& rng) const { return {radius.sample(rng), sigma.sample(rng)}; }
};

/// Haze envelope without the noise draw: 0.5 exp(-(d - r)^2 / (2 sigma^2)).
/// A zero sigma collapses the band onto d == r.
inline double haze_envelope(double d, const HazeParams& p) noexcept {
  const double delta = d - p.radius;
  if (p.sigma <= 0.0) return delta == 0.0 ? 0.5 : 0.0;
  return 0.5 * std::exp(-(delta * delta) / (2.0 * p.sigma * p.sigma));
}

namespace detail {

template <class NoiseAt>
Sample apply_haze(Sample sample, const HazeParams& params, NoiseAt&& noise_at) {
  const ScanMask& mask = require_scan_mask(sample);
  if (!(params.sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "haze sigma must be >= 0", sample.id);
  }
  ImageBuffer& image = sample.image;
  const PixelGrid grid(image.width(), image.height());
  for (std::size_t r = 0; r < image.height(); ++r) {
    auto px = image.row(r);
    auto s = mask.row(r);
    const double y = grid.y(r);
    for (std::size_t c = 0; c < image.width(); ++c) {
      if (s[c] == 0) continue;
      const double u = noise_at(r * image.width() + c);
      const double h = u * haze_envelope(radial_distance({grid.x(c), y}), params);
      px[c] = static_cast<float>(std::clamp(px[c] + h, 0.0, 1.0));
    }
  }
  return sample;
}

}  // namespace detail

/// Adds 0.5 u exp(-(d - r)^2 / 2 sigma^2) inside the scan mask with a fresh
/// u ~ U(0, 1) per masked pixel, visited in row-major order.
inline Sample haze_artifact(Sample sample, const HazeParams& params, Rng& rng) {
  return detail::apply_haze(std::move(sample), params,
                            [&rng](std::size_t) { return rng.uniform(); });
}

/// Same transform with an explicit row-major noise field of width*height
/// values in [0, 1]; entries outside the mask are ignored.
inline Sample haze_artifact(Sample sample, const HazeParams& params,
                            std::span<const float> noise) {
  if (noise.size() != sample.image.size()) {
    throw Error(ErrorCode::ShapeMismatch, "haze noise field size differs from image", sample.id);
  }
  return detail::apply_haze(std::move(sample), params,
                            [noise](std::size_t i) { return static_cast<double>(noise[i]); });
}

// ---------------------------------------------------------------------------
// Gaussian shadow
// ---------------------------------------------------------------------------

struct ShadowParams {
  double strength = 0.5;  // s, in [0, 1]
  NormalizedPoint center{0.5, 0.5};
  double sigma_x = 0.1;  // fraction of image width
  double sigma_y = 0.1;  // fraction of image height
  bool preserve_background = false;
};

/// Width range stated alongside the shadow formula; the experimental default
/// below is narrower.
inline constexpr Interval kShadowProseSigma{0.1, 0.4};

struct ShadowRanges {
  Interval strength{0.25, 0.8};
  Interval center_x{0.0, 1.0};
  Interval center_y{0.0, 1.0};
  Interval sigma_x{0.01, 0.2};
  Interval sigma_y{0.01, 0.2};

  ShadowParams sample(Rng& rng) const {
    ShadowParams p;
    p.strength = strength.sample(rng);
    p.center.x = center_x.sample(rng);
    p.center.y = center_y.sample(rng);
    p.sigma_x = sigma_x.sample(rng);
    p.sigma_y = sigma_y.sample(rng);
    return p;
  }
};

/// G(x, y) = 1 - s exp(-(x - cx)^2 / 2 sx^2 - (y - cy)^2 / 2 sy^2).
inline double shadow_factor(NormalizedPoint p, const ShadowParams& s) noexcept {
  const double dx = p.x - s.center.x;
  const double dy = p.y - s.center.y;
  const double e = dx * dx / (2.0 * s.sigma_x * s.sigma_x) + dy * dy / (2.0 * s.sigma_y * s.sigma_y);
  return 1.0 - s.strength * std::exp(-e);
}

inline void check(const ShadowParams& p) {
  if (!(p.strength >= 0.0 && p.strength <= 1.0) || !(p.sigma_x > 0.0) || !(p.sigma_y > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "shadow needs 0<=s<=1 and positive widths");
  }
}

/// out = I * S * G.
inline Sample gaussian_shadow(Sample sample, const ShadowParams& params) {
  const ScanMask& mask = require_scan_mask(sample);
  check(params);
  ImageBuffer& image = sample.image;
  const PixelGrid grid(image.width(), image.height());
  for (std::size_t r = 0; r < image.height(); ++r) {
    auto px = image.row(r);
    auto s = mask.row(r);
    const double y = grid.y(r);
    for (std::size_t c = 0; c < image.width(); ++c) {
      if (s[c] == 0) {
        if (!params.preserve_background) px[c] = 0.0f;
        continue;
      }
      const double g = shadow_factor({grid.x(c), y}, params);
      px[c] = static_cast<float>(std::clamp(g * px[c], 0.0, 1.0));
    }
  }
  return sample;
}

// ---------------------------------------------------------------------------
// Speckle reduction (bilateral filter)
// ---------------------------------------------------------------------------

struct BilateralParams {
  double sigma_spatial = 1.0;  // pixels
  double sigma_color = 0.1;    // normalized intensity
  int window_size = 5;
};

struct BilateralRanges {
  Interval sigma_spatial{0.05, 1.0};
  Interval sigma_color{0.05, 1.0};
  int window_size = 5;

  BilateralParams sample(Rng& rng) const {
    BilateralParams p;
    p.sigma_spatial = sigma_spatial.sample(rng);
    p.sigma_color = sigma_color.sample(rng);
    p.window_size = window_size;
    return p;
  }
};

/// Mirror index without repeating the edge sample (..., 2, 1, | 0, 1, 2, ...).
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) noexcept {
  if (n == 1) return 0;
  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  while (i < 0 || i > last) {
    i = i < 0 ? -i : 2 * last - i;
  }
  return static_cast<std::size_t>(i);
}

inline void check(const BilateralParams& p) {
  if (!(p.sigma_spatial > 0.0) || !(p.sigma_color > 0.0) || p.window_size < 3 ||
      p.window_size % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "bilateral filter needs positive sigmas and an odd window >= 3");
  }
}

/// Edge-preserving bilateral filter over a square window with reflected
/// borders. Each output is the normalized weighted mean of its window and is
/// clamped to that window's [min, max], so no new extrema appear.
inline Sample speckle_reduction(Sample sample, const BilateralParams& params) {
  check(params);
  const ImageBuffer& src = sample.image;
  const std::size_t w = src.width();
  const std::size_t h = src.height();
  const int radius = params.window_size / 2;
  const std::size_t span = static_cast<std::size_t>(params.window_size);

  // Reflect-padded copy so the inner loop needs no index arithmetic.
  const std::size_t pw = w + 2 * radius;
  const std::size_t ph = h + 2 * radius;
  std::vector<float> padded(pw * ph);
  for (std::size_t r = 0; r < ph; ++r) {
    const std::size_t sr = reflect_index(static_cast<std::ptrdiff_t>(r) - radius, h);
    for (std::size_t c = 0; c < pw; ++c) {
      padded[r * pw + c] = src(reflect_index(static_cast<std::ptrdiff_t>(c) - radius, w), sr);
    }
  }

  std::vector<float> spatial(span * span);
  const double inv_two_ss = 1.0 / (2.0 * params.sigma_spatial * params.sigma_spatial);
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      spatial[(dy + radius) * span + (dx + radius)] =
          static_cast<float>(std::exp(-(dx * dx + dy * dy) * inv_two_ss));
    }
  }
  const float inv_two_sc = static_cast<float>(1.0 / (2.0 * params.sigma_color * params.sigma_color));

  ImageBuffer out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const float center = padded[(r + radius) * pw + (c + radius)];
      float acc = 0.0f;
      float norm = 0.0f;
      float lo = center;
      float hi = center;
      for (std::size_t wy = 0; wy < span; ++wy) {
        const float* line = &padded[(r + wy) * pw + c];
        const float* sw = &spatial[wy * span];
        for (std::size_t wx = 0; wx < span; ++wx) {
          const float v = line[wx];
          const float diff = v - center;
          const float weight = sw[wx] * std::exp(-diff * diff * inv_two_sc);
          acc += weight * v;
          norm += weight;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      out(c, r) = std::clamp(acc / norm, lo, hi);
    }
  }
  sample.image = std::move(out);
  return sample;
}

}  // namespace fanforge

#endif  // FANFORGE_USAUG_HPP
