// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_POLICY_HPP
#define FANFORGE_POLICY_HPP

#include <cmath>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "fanforge/core.hpp"
#include "fanforge/random.hpp"
#include "fanforge/stdaug.hpp"
#include "fanforge/usaug.hpp"

namespace fanforge {

enum class OpId : std::uint8_t {
  Identity,
  FlipH,
  FlipV,
  Rotate,
  Zoom,
  RandomCrop,
  Translate,
  Brightness,
  Contrast,
  Gamma,
  GaussianNoise,
  DepthAttenuation,
  HazeArtifact,
  GaussianShadow,
  SpeckleReduction,
};

/// The fourteen augmentations, identity excluded.
inline constexpr std::array<OpId, 14> kAugmentations = {
    OpId::FlipH,      OpId::FlipV,         OpId::Rotate,           OpId::Zoom,
    OpId::RandomCrop, OpId::Translate,     OpId::Brightness,       OpId::Contrast,
    OpId::Gamma,      OpId::GaussianNoise, OpId::DepthAttenuation, OpId::HazeArtifact,
    OpId::GaussianShadow, OpId::SpeckleReduction,
};

inline constexpr std::string_view op_name(OpId op) noexcept {
  switch (op) {
    case OpId::Identity: return "identity";
    case OpId::FlipH: return "flip_h";
    case OpId::FlipV: return "flip_v";
    case OpId::Rotate: return "rotate";
    case OpId::Zoom: return "zoom";
    case OpId::RandomCrop: return "random_crop";
    case OpId::Translate: return "translate";
    case OpId::Brightness: return "brightness";
    case OpId::Contrast: return "contrast";
    case OpId::Gamma: return "gamma";
    case OpId::GaussianNoise: return "gaussian_noise";
    case OpId::DepthAttenuation: return "depth_attenuation";
    case OpId::HazeArtifact: return "haze_artifact";
    case OpId::GaussianShadow: return "gaussian_shadow";
    case OpId::SpeckleReduction: return "speckle_reduction";
  }
  return "unknown";
}

inline std::optional<OpId> parse_op_name(std::string_view name) noexcept {
  if (name == op_name(OpId::Identity)) return OpId::Identity;
  for (OpId op : kAugmentations) {
    if (name == op_name(op)) return op;
  }
  return std::nullopt;
}

inline constexpr bool requires_scan_mask(OpId op) noexcept {
  return op == OpId::DepthAttenuation || op == OpId::HazeArtifact || op == OpId::GaussianShadow;
}

inline constexpr bool is_geometric(OpId op) noexcept {
  return op == OpId::FlipH || op == OpId::FlipV || op == OpId::Rotate || op == OpId::Zoom ||
         op == OpId::RandomCrop || op == OpId::Translate;
}

using OpRanges = std::variant<std::monostate, RotateRanges, TranslateRanges, ZoomRanges,
                              BrightnessRanges, ContrastRanges, GammaRanges, NoiseRanges,
                              DepthAttenuationRanges, HazeRanges, ShadowRanges, BilateralRanges>;

inline OpRanges default_ranges(OpId op) {
  switch (op) {
    case OpId::Rotate: return RotateRanges{};
    case OpId::Zoom: return ZoomRanges{};
    case OpId::Translate: return TranslateRanges{};
    case OpId::Brightness: return BrightnessRanges{};
    case OpId::Contrast: return ContrastRanges{};
    case OpId::Gamma: return GammaRanges{};
    case OpId::GaussianNoise: return NoiseRanges{};
    case OpId::DepthAttenuation: return DepthAttenuationRanges{};
    case OpId::HazeArtifact: return HazeRanges{};
    case OpId::GaussianShadow: return ShadowRanges{};
    case OpId::SpeckleReduction: return BilateralRanges{};
    default: return std::monostate{};
  }
}

/// One named augmentation with the ranges its strengths are drawn from.
struct TransformSpec {
  OpId op = OpId::Identity;
  OpRanges ranges;
  bool enabled = true;

  static TransformSpec defaults(OpId op) { return {op, default_ranges(op), true}; }
  std::string_view name() const noexcept { return op_name(op); }
};

enum class PolicyMode { PerOpProbability, TrivialAugment };

/// per_op_probability: every enabled op in op_set applies independently with
/// probability `probability`, in list order.
/// trivial_augment: two slots drawn with replacement, each uniform over the
/// enabled ops plus an identity option (or over the ops alone when
/// `identity_in_set`), applied in draw order with probability 1.
struct PolicySpec {
  PolicyMode mode = PolicyMode::TrivialAugment;
  double probability = 0.5;
  std::vector<TransformSpec> op_set;
  bool identity_in_set = false;
};

inline std::vector<TransformSpec> default_op_set() {
  std::vector<TransformSpec> specs;
  for (OpId op : kAugmentations) specs.push_back(TransformSpec::defaults(op));
  return specs;
}

/// Draws strengths from `spec.ranges` and applies the op.
///
/// random_crop is size aware: a 256x256 sample is cropped at a random origin,
/// a sample already at 224x224 passes through (the crop window would cover
/// the whole image), anything else is a ShapeMismatch.
inline Sample apply_transform(Sample sample, const TransformSpec& spec, Rng& rng) {
  auto ranges = [&spec]<class R>(std::type_identity<R>) -> const R& {
    if (const R* r = std::get_if<R>(&spec.ranges)) return *r;
    throw Error(ErrorCode::InvalidArgument,
                "parameter ranges do not match op " + std::string(spec.name()));
  };
  switch (spec.op) {
    case OpId::Identity:
      return sample;
    case OpId::FlipH:
      return flip(std::move(sample), FlipAxis::Horizontal);
    case OpId::FlipV:
      return flip(std::move(sample), FlipAxis::Vertical);
    case OpId::Rotate: {
      const double angle = ranges(std::type_identity<RotateRanges>{}).angle.sample(rng);
      return rotate(std::move(sample), angle);
    }
    case OpId::Zoom: {
      const double delta = ranges(std::type_identity<ZoomRanges>{}).scale.sample(rng);
      return zoom(std::move(sample), delta);
    }
    case OpId::RandomCrop:
      if (sample.image.width() == kModelSize && sample.image.height() == kModelSize) {
        return sample;
      }
      return random_crop(std::move(sample), rng);
    case OpId::Translate: {
      const auto& r = ranges(std::type_identity<TranslateRanges>{});
      const double sx = r.shift_x.sample(rng);
      const double sy = r.shift_y.sample(rng);
      return translate(std::move(sample), sx, sy);
    }
    case OpId::Brightness:
      return adjust_brightness(std::move(sample),
                               ranges(std::type_identity<BrightnessRanges>{}).beta.sample(rng));
    case OpId::Contrast:
      return adjust_contrast(std::move(sample),
                             ranges(std::type_identity<ContrastRanges>{}).alpha.sample(rng));
    case OpId::Gamma:
      return adjust_gamma(std::move(sample),
                          ranges(std::type_identity<GammaRanges>{}).gamma.sample(rng));
    case OpId::GaussianNoise: {
      const double variance = ranges(std::type_identity<NoiseRanges>{}).variance.sample(rng);
      return gaussian_noise(std::move(sample), std::sqrt(variance), rng);
    }
    case OpId::DepthAttenuation: {
      require_scan_mask(sample);
      const auto params = ranges(std::type_identity<DepthAttenuationRanges>{}).sample(rng);
      return depth_attenuation(std::move(sample), params);
    }
    case OpId::HazeArtifact: {
      require_scan_mask(sample);
      const auto params = ranges(std::type_identity<HazeRanges>{}).sample(rng);
      return haze_artifact(std::move(sample), params, rng);
    }
    case OpId::GaussianShadow: {
      require_scan_mask(sample);
      const auto params = ranges(std::type_identity<ShadowRanges>{}).sample(rng);
      return gaussian_shadow(std::move(sample), params);
    }
    case OpId::SpeckleReduction: {
      const auto params = ranges(std::type_identity<BilateralRanges>{}).sample(rng);
      return speckle_reduction(std::move(sample), params);
    }
  }
  return sample;
}

/// With probability p apply `spec` at a freshly drawn strength, otherwise
/// return the sample unchanged. One uniform draw decides the gate.
inline Sample apply_per_op(Sample sample, const TransformSpec& spec, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "probability must lie in [0, 1]", sample.id);
  }
  if (rng.uniform() < p) return apply_transform(std::move(sample), spec, rng);
  return sample;
}

/// Index of one TrivialAugment slot: a value in [0, k) selects that op, the
/// value k (only possible when identity is an extra option) means identity.
inline std::size_t draw_slot(Rng& rng, std::size_t k, bool identity_in_set = false) {
  return static_cast<std::size_t>(rng.below(identity_in_set ? k : k + 1));
}

/// Applies the two slot choices in order. Slot values equal to op_set.size()
/// are identity.
inline Sample apply_slots(Sample sample, std::span<const TransformSpec> op_set,
                          std::span<const std::size_t> slots, Rng& rng) {
  for (std::size_t slot : slots) {
    if (slot < op_set.size()) sample = apply_transform(std::move(sample), op_set[slot], rng);
  }
  return sample;
}

inline constexpr std::size_t kTrivialAugmentSlots = 2;

inline Sample trivial_augment(Sample sample, std::span<const TransformSpec> op_set, Rng& rng,
                              bool identity_in_set = false) {
  if (op_set.empty()) {
    throw Error(ErrorCode::InvalidArgument, "trivial augment needs a non-empty op set", sample.id);
  }
  std::array<std::size_t, kTrivialAugmentSlots> slots{};
  for (auto& s : slots) s = draw_slot(rng, op_set.size(), identity_in_set);
  return apply_slots(std::move(sample), op_set, slots, rng);
}

inline std::vector<TransformSpec> enabled_ops(const PolicySpec& policy) {
  std::vector<TransformSpec> ops;
  for (const auto& spec : policy.op_set) {
    if (spec.enabled) ops.push_back(spec);
  }
  return ops;
}

/// Stage index of the policy stream within a sample's seed space.
inline constexpr std::uint64_t kPolicyStage = 0;

/// Applies `policy` with a stream derived from the sample's own seed.
inline Sample apply_policy(Sample sample, const PolicySpec& policy) {
  Rng rng(derive_sample_seed(sample.seed, kPolicyStage));
  const auto ops = enabled_ops(policy);
  if (policy.mode == PolicyMode::TrivialAugment) {
    return trivial_augment(std::move(sample), ops, rng, policy.identity_in_set);
  }
  for (const auto& spec : ops) sample = apply_per_op(std::move(sample), spec, policy.probability, rng);
  return sample;
}

}  // namespace fanforge

#endif  // FANFORGE_POLICY_HPP
