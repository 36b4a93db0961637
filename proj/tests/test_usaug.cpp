// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"

namespace {

using namespace fanforge;
using fanforge::testing::random_image;
using fanforge::testing::random_sample;

Sample constant_sample(std::size_t w, std::size_t h, float v) {
  Sample s;
  s.image = ImageBuffer(w, h, v);
  s.scan_mask = ScanMask(w, h, 1);
  return s;
}

TEST(DepthAttenuation, BottomCenterAtRateOnePointFive) {
  auto s = constant_sample(5, 5, 1.0f);
  const auto out = depth_attenuation(s, {0.0, 1.5, false});
  EXPECT_NEAR(out.image(2, 4), 0.223130, 1e-6);
  EXPECT_EQ(out.image(2, 0), 1.0f);  // apex, d = 0
}

TEST(DepthAttenuation, FloorHoldsAtLargeDepth) {
  DepthAttenuationParams p{0.3, 50.0, false};
  EXPECT_NEAR(attenuation_factor(1.0, p), 0.3, 1e-12);
  EXPECT_NEAR(attenuation_factor(0.0, p), 1.0, 1e-12);
}

TEST(DepthAttenuation, FactorDecreasesWithDepth) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const DepthAttenuationParams p{rng.uniform(), rng.uniform(0.0, 5.0), false};
    double prev = attenuation_factor(0.0, p);
    for (double d = 0.05; d <= 1.12; d += 0.05) {
      const double a = attenuation_factor(d, p);
      ASSERT_LE(a, prev + 1e-15);
      ASSERT_GE(a, p.max_attenuation - 1e-15);
      prev = a;
    }
  }
}

TEST(DepthAttenuation, BackgroundZeroedUnlessPreserved) {
  auto s = constant_sample(6, 6, 0.8f);
  (*s.scan_mask)(0, 5) = 0;
  EXPECT_EQ(depth_attenuation(s, {0.0, 1.0, false}).image(0, 5), 0.0f);
  EXPECT_EQ(depth_attenuation(s, {0.0, 1.0, true}).image(0, 5), 0.8f);
}

TEST(DepthAttenuation, RequiresMaskAndValidParams) {
  Sample s;
  s.image = ImageBuffer(4, 4, 0.5f);
  EXPECT_FANFORGE_ERROR(depth_attenuation(s, {}), ErrorCode::MissingScanMask);
  s.scan_mask = ScanMask(3, 4, 1);
  EXPECT_FANFORGE_ERROR(depth_attenuation(s, {}), ErrorCode::ShapeMismatch);
  s.scan_mask = ScanMask(4, 4, 1);
  EXPECT_FANFORGE_ERROR(depth_attenuation(s, {1.5, 1.0, false}), ErrorCode::InvalidArgument);
  EXPECT_FANFORGE_ERROR(depth_attenuation(s, {0.0, -1.0, false}), ErrorCode::InvalidArgument);
}

TEST(Haze, EnvelopePeaksAtRadius) {
  const HazeParams p{0.4, 0.05};
  EXPECT_DOUBLE_EQ(haze_envelope(0.4, p), 0.5);
  EXPECT_NEAR(haze_envelope(0.45, p), 0.5 * std::exp(-0.5), 1e-12);
  EXPECT_DOUBLE_EQ(haze_envelope(0.4, {0.4, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(haze_envelope(0.41, {0.4, 0.0}), 0.0);
}

TEST(Haze, NoiseFieldOverloadMatchesRngDraws) {
  auto s = random_sample(17, 13, 5);
  for (std::size_t i = 0; i < s.scan_mask->size(); i += 3) s.scan_mask->values()[i] = 0;
  const HazeParams p{0.5, 0.08};
  // The rng overload consumes one uniform per masked pixel in row-major order.
  Rng draw(77);
  std::vector<float> field(s.image.size(), 0.0f);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (s.scan_mask->values()[i]) field[i] = static_cast<float>(draw.uniform());
  }
  Rng rng(77);
  const auto a = haze_artifact(s, p, rng);
  const auto b = haze_artifact(s, p, field);
  for (std::size_t i = 0; i < field.size(); ++i) {
    EXPECT_NEAR(a.image.values()[i], b.image.values()[i], 1e-6);
  }
}

TEST(Haze, OnlyBrightensInsideMaskAndLeavesBackground) {
  auto s = random_sample(32, 32, 6);
  for (std::size_t i = 0; i < 64; ++i) s.scan_mask->values()[i] = 0;
  Rng rng(1);
  const auto out = haze_artifact(s, {0.3, 0.1}, rng);
  for (std::size_t i = 0; i < s.image.size(); ++i) {
    if (i < 64) {
      EXPECT_EQ(out.image.values()[i], s.image.values()[i]);
    } else {
      EXPECT_GE(out.image.values()[i], s.image.values()[i]);
      EXPECT_LE(out.image.values()[i], 1.0f);
    }
  }
}

TEST(Haze, RejectsBadInputs) {
  auto s = random_sample(8, 8, 1);
  std::vector<float> short_field(10, 0.0f);
  EXPECT_FANFORGE_ERROR(haze_artifact(s, {0.5, 0.1}, short_field), ErrorCode::ShapeMismatch);
  Rng rng(1);
  EXPECT_FANFORGE_ERROR(haze_artifact(s, {0.5, -0.1}, rng), ErrorCode::InvalidArgument);
  s.scan_mask.reset();
  EXPECT_FANFORGE_ERROR(haze_artifact(s, {0.5, 0.1}, rng), ErrorCode::MissingScanMask);
}

TEST(Shadow, CenterDimmedByStrength) {
  ShadowParams p;
  p.strength = 0.6;
  p.center = {0.25, 0.75};
  EXPECT_NEAR(shadow_factor({0.25, 0.75}, p), 0.4, 1e-12);
  EXPECT_NEAR(shadow_factor({0.25 + p.sigma_x, 0.75}, p), 1.0 - 0.6 * std::exp(-0.5), 1e-12);
}

TEST(Shadow, NeverBrightens) {
  auto s = random_sample(40, 30, 9);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = ShadowRanges{}.sample(rng);
    const auto out = gaussian_shadow(s, p);
    for (std::size_t k = 0; k < s.image.size(); ++k) {
      ASSERT_LE(out.image.values()[k], s.image.values()[k]);
    }
  }
}

TEST(Shadow, DefaultRangesStayInTable) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto p = ShadowRanges{}.sample(rng);
    ASSERT_GE(p.strength, 0.25);
    ASSERT_LT(p.strength, 0.8);
    ASSERT_GE(p.sigma_x, 0.01);
    ASSERT_LT(p.sigma_y, 0.2);
  }
  EXPECT_EQ(kShadowProseSigma.lo, 0.1);
  EXPECT_EQ(kShadowProseSigma.hi, 0.4);
}

TEST(Shadow, RejectsBadParams) {
  auto s = random_sample(8, 8, 1);
  ShadowParams p;
  p.strength = 1.2;
  EXPECT_FANFORGE_ERROR(gaussian_shadow(s, p), ErrorCode::InvalidArgument);
  p.strength = 0.5;
  p.sigma_x = 0.0;
  EXPECT_FANFORGE_ERROR(gaussian_shadow(s, p), ErrorCode::InvalidArgument);
}

TEST(Bilateral, ReflectIndexSkipsEdge) {
  EXPECT_EQ(reflect_index(-1, 5), 1u);
  EXPECT_EQ(reflect_index(-2, 5), 2u);
  EXPECT_EQ(reflect_index(5, 5), 3u);
  EXPECT_EQ(reflect_index(6, 5), 2u);
  EXPECT_EQ(reflect_index(-3, 2), 1u);
  EXPECT_EQ(reflect_index(4, 1), 0u);
}

TEST(Bilateral, ConstantImageIsFixedPoint) {
  for (float v : {0.0f, 0.3f, 1.0f}) {
    const auto s = constant_sample(9, 7, v);
    EXPECT_EQ(speckle_reduction(s, {0.7, 0.2, 5}).image, s.image);
  }
}

TEST(Bilateral, ReducesVarianceOfNoise) {
  const auto s = random_sample(64, 64, 12);
  const auto out = speckle_reduction(s, {1.0, 1.0, 5});
  auto var = [](const ImageBuffer& img) {
    double m = 0.0, q = 0.0;
    for (float v : img.values()) m += v;
    m /= static_cast<double>(img.size());
    for (float v : img.values()) q += (v - m) * (v - m);
    return q / static_cast<double>(img.size());
  };
  EXPECT_LT(var(out.image), 0.5 * var(s.image));
}

TEST(Bilateral, RejectsBadParams) {
  const auto s = random_sample(8, 8, 1);
  EXPECT_FANFORGE_ERROR(speckle_reduction(s, {0.0, 0.1, 5}), ErrorCode::InvalidArgument);
  EXPECT_FANFORGE_ERROR(speckle_reduction(s, {1.0, 0.1, 4}), ErrorCode::InvalidArgument);
}

TEST(Bilateral, TinyImagesWork) {
  Sample s;
  s.image = random_image(1, 1, 3);
  EXPECT_EQ(speckle_reduction(s, {1.0, 0.1, 5}).image, s.image);
  s.image = random_image(2, 3, 3);
  EXPECT_EQ(speckle_reduction(s, {1.0, 0.1, 5}).image.width(), 2u);
}

TEST(UltrasoundOps, DeterministicAndLeaveLabelsAlone) {
  auto s = random_sample(40, 30, 21);
  for (std::size_t i = 0; i < s.scan_mask->size(); i += 3) s.scan_mask->values()[i] = 0;
  Raster<std::uint8_t> ids(40, 30);
  for (std::size_t i = 0; i < ids.size(); ++i) ids.values()[i] = static_cast<std::uint8_t>(i % 4);
  s.label_mask = LabelMask{ids, 4};
  s.label = 2;
  const DepthAttenuationParams dp{0.2, 1.7, false};
  const HazeParams hp{0.4, 0.05};
  ShadowParams sp;
  sp.strength = 0.6;
  const BilateralParams bp{0.7, 0.3, 5};
  std::vector<Sample> outs;
  for (int run = 0; run < 2; ++run) {
    Rng rng(55);
    outs.push_back(depth_attenuation(s, dp));
    outs.push_back(haze_artifact(s, hp, rng));
    outs.push_back(gaussian_shadow(s, sp));
    outs.push_back(speckle_reduction(s, bp));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(outs[k], outs[k + 4]) << k;
    EXPECT_EQ(outs[k].label_mask->ids, ids) << k;
    EXPECT_EQ(outs[k].label, 2) << k;
    EXPECT_EQ(*outs[k].scan_mask, *s.scan_mask) << k;
  }
}

TEST(DepthAttenuation, FactorBoundedAndMonotoneAlongRays) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const DepthAttenuationParams p{rng.uniform(), rng.uniform(0.0, 3.0), false};
    const double angle = rng.uniform(-1.4, 1.4);
    double previous = 2.0;
    for (int step = 0; step <= 100; ++step) {
      const double d = 0.012 * step;
      const double a = attenuation_factor(d, p);
      ASSERT_GE(a, p.max_attenuation - 1e-15);
      ASSERT_LE(a, 1.0);
      ASSERT_LE(a, previous);
      previous = a;
      // The same value is reached through the pixel-space distance.
      const NormalizedPoint q{0.5 + d * std::sin(angle), d * std::cos(angle)};
      ASSERT_NEAR(attenuation_factor(radial_distance(q), p), a, 1e-12);
    }
  }
}

}  // namespace
