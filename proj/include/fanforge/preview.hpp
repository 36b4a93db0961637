// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_PREVIEW_HPP
#define FANFORGE_PREVIEW_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include "fanforge/io.hpp"
#include "fanforge/policy.hpp"
#include "fanforge/stdaug.hpp"

namespace fanforge {

/// Grid with one row per op and `variants_per_op + 1` columns; column 0 is
/// the (preprocessed) input, the rest are independent draws of the op. Cell
/// (row, v) uses seed derive_sample_seed(seed, row * variants_per_op + v).
inline ImageBuffer render_preview_grid(const Sample& sample, std::span<const TransformSpec> ops,
                                       std::size_t variants_per_op, std::uint64_t seed) {
  if (variants_per_op < 1) {
    throw Error(ErrorCode::InvalidArgument, "preview needs at least one variant per op");
  }
  if (ops.empty()) throw Error(ErrorCode::InvalidArgument, "preview needs at least one op");
  const Sample input = preprocess(sample, false);
  const Sample crop_input = resize(input, kCropSourceSize, kCropSourceSize);
  const std::size_t cell_w = input.image.width();
  const std::size_t cell_h = input.image.height();
  ImageBuffer grid(cell_w * (variants_per_op + 1), cell_h * ops.size(), 0.0f);

  auto blit = [&](const ImageBuffer& cell, std::size_t row, std::size_t col) {
    for (std::size_t r = 0; r < cell_h; ++r) {
      auto src = cell.row(r);
      std::copy(src.begin(), src.end(),
                grid.row(row * cell_h + r).begin() + static_cast<std::ptrdiff_t>(col * cell_w));
    }
  };

  for (std::size_t row = 0; row < ops.size(); ++row) {
    blit(input.image, row, 0);
    const bool crops = ops[row].op == OpId::RandomCrop;
    for (std::size_t v = 0; v < variants_per_op; ++v) {
      Rng rng(derive_sample_seed(seed, row * variants_per_op + v));
      Sample out = apply_transform(crops ? crop_input : input, ops[row], rng);
      blit(out.image, row, v + 1);
    }
  }
  return grid;
}

inline void emit_preview_grid(const Sample& sample, std::span<const TransformSpec> ops,
                              std::size_t variants_per_op, const std::filesystem::path& out_path,
                              std::uint64_t seed) {
  write_image(out_path, render_preview_grid(sample, ops, variants_per_op, seed));
}

}  // namespace fanforge

#endif  // FANFORGE_PREVIEW_HPP
