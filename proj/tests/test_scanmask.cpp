// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

using namespace fanforge;

/// Brute-force disk dilation, the oracle for the prefix-sum version.
ScanMask naive_dilate(const ScanMask& in, int radius) {
  const auto w = static_cast<int>(in.width());
  const auto h = static_cast<int>(in.height());
  ScanMask out(in.width(), in.height(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx * dx + dy * dy > radius * radius) continue;
          const int rr = r + dy, cc = c + dx;
          if (rr < 0 || cc < 0 || rr >= h || cc >= w) continue;
          if (in(cc, rr)) out(c, r) = 1;
        }
      }
    }
  }
  return out;
}

double iou(const ScanMask& a, const ScanMask& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a.values()[i] && b.values()[i];
    uni += a.values()[i] || b.values()[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

ScanMask random_mask(std::size_t w, std::size_t h, double density, std::uint64_t seed) {
  Rng rng(seed);
  ScanMask m(w, h, 0);
  for (auto& v : m.values()) v = rng.uniform() < density ? 1 : 0;
  return m;
}

TEST(Morphology, DilationMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_mask(37, 23, 0.03, seed);
    for (int radius : {1, 2, 5}) {
      EXPECT_EQ(morph::dilate(m, radius), naive_dilate(m, radius)) << seed << " " << radius;
    }
  }
}

TEST(Morphology, ErosionIsDualOfDilation) {
  const auto m = random_mask(30, 30, 0.7, 4);
  ScanMask inverted = m;
  for (auto& v : inverted.values()) v = 1 - v;
  ScanMask expect = naive_dilate(inverted, 3);
  for (auto& v : expect.values()) v = 1 - v;
  EXPECT_EQ(morph::erode(m, 3), expect);
}

TEST(Morphology, ClosingIsExtensiveAndIdempotent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_mask(40, 32, 0.2, seed);
    const auto c = morph::close(m, 2);
    for (std::size_t i = 0; i < m.size(); ++i) ASSERT_GE(c.values()[i], m.values()[i]);
    EXPECT_EQ(morph::close(c, 2), c);
  }
}

TEST(Morphology, ComponentsAreFourConnected) {
  ScanMask m(5, 5, 0);
  m(1, 1) = 1;
  m(2, 2) = 1;  // diagonal neighbour only
  m(4, 4) = 1;
  m(4, 3) = 1;
  std::int32_t count = 0;
  morph::label_components(m, count);
  EXPECT_EQ(count, 3);
}

TEST(Morphology, LargestComponentTieGoesToFirst) {
  ScanMask m(6, 1, 0);
  m(0, 0) = m(1, 0) = 1;
  m(4, 0) = m(5, 0) = 1;
  const auto out = morph::largest_component(m);
  EXPECT_EQ(out(0, 0), 1);
  EXPECT_EQ(out(4, 0), 0);
}

TEST(Morphology, FillHolesKeepsBorderConnectedBackground) {
  ScanMask m(7, 7, 0);
  for (std::size_t r = 1; r <= 5; ++r) {
    for (std::size_t c = 1; c <= 5; ++c) m(c, r) = (r == 1 || r == 5 || c == 1 || c == 5);
  }
  const auto out = morph::fill_holes(m);
  EXPECT_EQ(out(3, 3), 1);
  EXPECT_EQ(out(0, 0), 0);
  m(5, 3) = 0;  // open the ring to the outside
  EXPECT_EQ(morph::fill_holes(m)(3, 3), 0);
}

TEST(ScanMask, RecoversSyntheticFan) {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Sample s = make_synthetic_fan(224, 224, seed);
    // Dark speckle drop-outs inside the fan must not punch holes in the mask.
    Rng rng(seed);
    for (float& v : s.image.values()) {
      if (v > 0.0f && rng.uniform() < 0.05) v = 0.0f;
    }
    const auto mask = generate_scan_mask(s.image);
    EXPECT_GE(iou(mask, *s.scan_mask), 0.95) << seed;
    EXPECT_TRUE(is_binary(mask));
  }
}

TEST(ScanMask, RejectsCornerBlobs) {
  Sample s = make_synthetic_fan(200, 160, 4);
  for (std::size_t r = 140; r < 156; ++r) {
    for (std::size_t c = 2; c < 14; ++c) s.image(c, r) = 0.9f;  // burnt-in text block
  }
  for (std::size_t r = 2; r < 8; ++r) {
    for (std::size_t c = 185; c < 198; ++c) s.image(c, r) = 0.7f;
  }
  const auto mask = generate_scan_mask(s.image);
  EXPECT_EQ(mask(5, 150), 0);
  EXPECT_EQ(mask(190, 4), 0);
  EXPECT_GE(iou(mask, *s.scan_mask), 0.95);
}

TEST(ScanMask, ThresholdIsStrict) {
  ImageBuffer img(20, 20, 0.0f);
  img(10, 10) = 4.0f / 255.0f;
  EXPECT_FANFORGE_ERROR(generate_scan_mask(img), ErrorCode::EmptyMask);
  img(10, 10) = 5.0f / 255.0f;
  EXPECT_EQ(generate_scan_mask(img)(10, 10), 1);
}

TEST(ScanMask, ErrorsOnEmptyAndBadParams) {
  EXPECT_FANFORGE_ERROR(generate_scan_mask(ImageBuffer(16, 16, 0.0f)), ErrorCode::EmptyMask);
  EXPECT_FANFORGE_ERROR(generate_scan_mask(ImageBuffer()), ErrorCode::ShapeMismatch);
  MaskGenParams p;
  p.closing_radius = 0;
  EXPECT_FANFORGE_ERROR(generate_scan_mask(ImageBuffer(4, 4, 1.0f), p), ErrorCode::InvalidArgument);
}

TEST(ScanMask, FullFrameStaysFull) {
  const auto mask = generate_scan_mask(ImageBuffer(30, 20, 0.5f));
  for (auto v : mask.values()) EXPECT_EQ(v, 1);
}

TEST(ScanMask, StableWhenReappliedToMaskedImage) {
  for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
    Sample s = make_synthetic_fan(256, 192, seed);
    const auto first = generate_scan_mask(s.image);
    ImageBuffer masked = s.image;
    for (std::size_t i = 0; i < masked.size(); ++i) {
      if (!first.values()[i]) masked.values()[i] = 0.0f;
    }
    const auto second = generate_scan_mask(masked);
    for (std::size_t i = 0; i < first.size(); ++i) ASSERT_GE(second.values()[i], first.values()[i]);
    EXPECT_GE(iou(first, second), 0.99);
  }
}

TEST(ScanMask, SingleComponentWhenKeepingLargest) {
  Sample s = make_synthetic_fan(200, 150, 8);
  for (std::size_t r = 2; r < 9; ++r) {
    for (std::size_t c = 2; c < 9; ++c) s.image(c, r) = 0.6f;
  }
  std::int32_t count = 0;
  morph::label_components(generate_scan_mask(s.image), count);
  EXPECT_EQ(count, 1);
}

}  // namespace
