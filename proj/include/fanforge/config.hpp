// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_CONFIG_HPP
#define FANFORGE_CONFIG_HPP

// JSON schemas for policies and batch runs. Unknown keys are rejected, and
// every SchemaError carries the path of the offending key in `subject()`
// (for example "op_set[2].name" or "policy.probability").

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fanforge/core.hpp"
#include "fanforge/policy.hpp"
#include "fanforge/stdaug.hpp"
#include "json.hpp"

namespace fanforge {

using nlohmann::json;

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kSeedEnvVar = "FANFORGE_SEED";

namespace schema {

inline std::string join(std::string_view prefix, std::string_view key) {
  if (prefix.empty()) return std::string(key);
  return std::string(prefix) + "." + std::string(key);
}

[[noreturn]] inline void fail(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::SchemaError, path + ": " + why, path);
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
}

inline void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                           const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) fail(join(path, key), "unknown key");
  }
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline std::uint64_t unsigned_integer(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

/// [lo, hi] or a single number meaning a fixed value.
inline Interval interval(const json& j, const std::string& path, double min_allowed,
                         double max_allowed) {
  Interval r;
  if (j.is_number()) {
    r.lo = r.hi = j.get<double>();
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    r.lo = j[0].get<double>();
    r.hi = j[1].get<double>();
  } else {
    fail(path, "expected [lo, hi] or a number");
  }
  if (!r.within(min_allowed, max_allowed)) {
    fail(path, "range must satisfy " + std::to_string(min_allowed) + " <= lo <= hi <= " +
                   std::to_string(max_allowed));
  }
  return r;
}

/// Field binding for one parameter range of an op.
struct RangeField {
  std::string_view key;
  Interval* target;
  double min_allowed;
  double max_allowed;
};

inline void parse_ranges(const json& params, const std::string& path,
                         std::initializer_list<RangeField> fields) {
  require_object(params, path);
  for (const auto& [key, value] : params.items()) {
    const RangeField* match = nullptr;
    for (const auto& f : fields) {
      if (f.key == key) match = &f;
    }
    if (!match) fail(join(path, key), "unknown parameter");
    *match->target = interval(value, join(path, key), match->min_allowed, match->max_allowed);
  }
}

inline void parse_params(TransformSpec& spec, const json& params, const std::string& path) {
  constexpr double tiny = 1e-9;
  std::visit(
      [&](auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, std::monostate>) {
          require_object(params, path);
          if (!params.empty()) fail(join(path, params.begin().key()), "op takes no parameters");
        } else if constexpr (std::is_same_v<R, RotateRanges>) {
          parse_ranges(params, path, {{"angle", &r.angle, -180.0, 180.0}});
        } else if constexpr (std::is_same_v<R, TranslateRanges>) {
          parse_ranges(params, path,
                       {{"shift_x", &r.shift_x, -1.0, 1.0}, {"shift_y", &r.shift_y, -1.0, 1.0}});
        } else if constexpr (std::is_same_v<R, ZoomRanges>) {
          parse_ranges(params, path, {{"scale", &r.scale, -0.9, 10.0}});
        } else if constexpr (std::is_same_v<R, BrightnessRanges>) {
          parse_ranges(params, path, {{"beta", &r.beta, -1.0, 1.0}});
        } else if constexpr (std::is_same_v<R, ContrastRanges>) {
          parse_ranges(params, path, {{"alpha", &r.alpha, -1.0, 10.0}});
        } else if constexpr (std::is_same_v<R, GammaRanges>) {
          parse_ranges(params, path, {{"gamma", &r.gamma, tiny, 10.0}});
        } else if constexpr (std::is_same_v<R, NoiseRanges>) {
          parse_ranges(params, path, {{"variance", &r.variance, 0.0, 1.0}});
        } else if constexpr (std::is_same_v<R, DepthAttenuationRanges>) {
          parse_ranges(params, path,
                       {{"max_attenuation", &r.max_attenuation, 0.0, 1.0},
                        {"attenuation_rate", &r.attenuation_rate, 0.0, 100.0}});
        } else if constexpr (std::is_same_v<R, HazeRanges>) {
          parse_ranges(params, path,
                       {{"radius", &r.radius, 0.0, 2.0}, {"sigma", &r.sigma, 0.0, 1.0}});
        } else if constexpr (std::is_same_v<R, ShadowRanges>) {
          parse_ranges(params, path,
                       {{"strength", &r.strength, 0.0, 1.0},
                        {"center_x", &r.center_x, 0.0, 1.0},
                        {"center_y", &r.center_y, 0.0, 1.0},
                        {"sigma_x", &r.sigma_x, tiny, 1.0},
                        {"sigma_y", &r.sigma_y, tiny, 1.0}});
        } else if constexpr (std::is_same_v<R, BilateralRanges>) {
          json ranges = params;
          if (params.is_object() && params.contains("window_size")) {
            const std::string wpath = join(path, "window_size");
            const auto& wj = params["window_size"];
            if (!wj.is_number_integer()) fail(wpath, "expected an integer");
            const int ws = wj.get<int>();
            if (ws < 3 || ws > 31 || ws % 2 == 0) fail(wpath, "must be odd and in [3, 31]");
            r.window_size = ws;
            ranges.erase("window_size");
          }
          parse_ranges(ranges, path,
                       {{"sigma_spatial", &r.sigma_spatial, tiny, 100.0},
                        {"sigma_color", &r.sigma_color, tiny, 1e9}});
        }
      },
      spec.ranges);
}

inline TransformSpec parse_transform(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto op = parse_op_name(j.get<std::string>());
    if (!op) fail(path, "unknown op '" + j.get<std::string>() + "'");
    return TransformSpec::defaults(*op);
  }
  require_object(j, path);
  reject_unknown(j, {"name", "enabled", "params"}, path);
  if (!j.contains("name")) fail(join(path, "name"), "missing");
  const std::string name = string(j["name"], join(path, "name"));
  const auto op = parse_op_name(name);
  if (!op) fail(join(path, "name"), "unknown op '" + name + "'");
  TransformSpec spec = TransformSpec::defaults(*op);
  if (j.contains("enabled")) spec.enabled = boolean(j["enabled"], join(path, "enabled"));
  if (j.contains("params")) parse_params(spec, j["params"], join(path, "params"));
  return spec;
}

}  // namespace schema

/// Policy object:
///   {"mode": "trivial_augment" | "per_op_probability",
///    "probability": 0.5, "identity_in_set": false,
///    "op_set": "all" | ["rotate", {"name": "haze_artifact", "enabled": true,
///                                  "params": {"radius": [0.05, 0.95]}}, ...]}
inline PolicySpec parse_policy(const json& j, const std::string& path = {}) {
  schema::require_object(j, path);
  schema::reject_unknown(j, {"mode", "probability", "identity_in_set", "op_set"}, path);
  PolicySpec p;
  if (!j.contains("mode")) schema::fail(schema::join(path, "mode"), "missing");
  const std::string mode = schema::string(j["mode"], schema::join(path, "mode"));
  if (mode == "trivial_augment") {
    p.mode = PolicyMode::TrivialAugment;
  } else if (mode == "per_op_probability") {
    p.mode = PolicyMode::PerOpProbability;
  } else {
    schema::fail(schema::join(path, "mode"), "expected trivial_augment or per_op_probability");
  }
  if (j.contains("probability")) {
    const auto ppath = schema::join(path, "probability");
    p.probability = schema::number(j["probability"], ppath);
    if (!(p.probability >= 0.0 && p.probability <= 1.0)) schema::fail(ppath, "must lie in [0, 1]");
  }
  if (j.contains("identity_in_set")) {
    p.identity_in_set = schema::boolean(j["identity_in_set"], schema::join(path, "identity_in_set"));
  }
  const auto set_path = schema::join(path, "op_set");
  if (!j.contains("op_set")) schema::fail(set_path, "missing");
  const auto& ops = j["op_set"];
  if (ops.is_string() && ops.get<std::string>() == "all") {
    p.op_set = default_op_set();
  } else if (ops.is_array()) {
    std::set<OpId> seen;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string item = set_path + "[" + std::to_string(i) + "]";
      auto spec = schema::parse_transform(ops[i], item);
      if (!seen.insert(spec.op).second) {
        schema::fail(ops[i].is_string() ? item : schema::join(item, "name"), "duplicate op");
      }
      p.op_set.push_back(std::move(spec));
    }
  } else {
    schema::fail(set_path, "expected \"all\" or an array");
  }
  if (p.mode == PolicyMode::TrivialAugment && enabled_ops(p).empty()) {
    schema::fail(set_path, "trivial_augment needs at least one enabled op");
  }
  return p;
}

inline bool uses_op(const PolicySpec& policy, OpId op) {
  for (const auto& s : policy.op_set) {
    if (s.enabled && s.op == op) return true;
  }
  return false;
}

/// Everything between a loaded sample and its augmented output: preprocessing,
/// the policy, and a center crop back to 224 when crop-mode inputs were not
/// cropped by the policy. Immutable and shareable across threads.
class CompiledTransform {
 public:
  CompiledTransform(PolicySpec policy, bool crop_mode)
      : policy_(std::move(policy)), crop_mode_(crop_mode) {}

  /// Accepts a bare policy object, or {"policy": {...}, "preprocess":
  /// {"crop_mode": bool}}. crop_mode defaults to whether random_crop is used.
  static CompiledTransform from_json(const json& j) {
    schema::require_object(j, "");
    if (!j.contains("policy")) {
      auto policy = parse_policy(j);
      const bool crop = uses_op(policy, OpId::RandomCrop);
      return {std::move(policy), crop};
    }
    schema::reject_unknown(j, {"policy", "preprocess"}, "");
    auto policy = parse_policy(j["policy"], "policy");
    bool crop = uses_op(policy, OpId::RandomCrop);
    if (j.contains("preprocess")) {
      const auto& pre = j["preprocess"];
      schema::require_object(pre, "preprocess");
      schema::reject_unknown(pre, {"crop_mode"}, "preprocess");
      if (pre.contains("crop_mode")) crop = schema::boolean(pre["crop_mode"], "preprocess.crop_mode");
    }
    return {std::move(policy), crop};
  }

  static CompiledTransform from_json_text(std::string_view text) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what(), "<root>");
    }
    return from_json(j);
  }

  const PolicySpec& policy() const noexcept { return policy_; }
  bool crop_mode() const noexcept { return crop_mode_; }

  /// Preprocess, augment with the stream of `sample.seed`, finalize to 224.
  Sample operator()(Sample sample) const {
    sample = preprocess(std::move(sample), crop_mode_);
    sample = apply_policy(std::move(sample), policy_);
    if (sample.image.width() != kModelSize || sample.image.height() != kModelSize) {
      sample = center_crop(std::move(sample));
    }
    return sample;
  }

 private:
  PolicySpec policy_;
  bool crop_mode_;
};

/// Batch run configuration (JSON, schema version 1):
///   {"schema": 1, "global_seed": 42, "workers": 4, "variants_per_sample": 1,
///    "policy": {...}, "preprocess": {"crop_mode": false},
///    "io": {"input_manifest": "m.jsonl", "output_dir": "out", "format": "png8"}}
/// Relative io paths resolve against the config file's directory.
struct RunConfig {
  std::uint64_t global_seed = 0;
  PolicySpec policy;
  bool crop_mode = false;
  std::filesystem::path input_manifest;
  std::filesystem::path output_dir;
  std::string format = "png8";
  std::size_t workers = 1;
  std::size_t variants_per_sample = 1;

  CompiledTransform transform() const { return {policy, crop_mode}; }
};

inline RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using schema::fail;
  schema::require_object(j, "");
  schema::reject_unknown(j, {"schema", "global_seed", "policy", "preprocess", "io", "workers",
                             "variants_per_sample"},
                         "");
  if (!j.contains("schema")) fail("schema", "missing");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kConfigSchemaVersion) {
    fail("schema", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  RunConfig c;
  if (j.contains("global_seed")) c.global_seed = schema::unsigned_integer(j["global_seed"], "global_seed");
  if (!j.contains("policy")) fail("policy", "missing");
  c.policy = parse_policy(j["policy"], "policy");
  if (j.contains("preprocess")) {
    const auto& pre = j["preprocess"];
    schema::require_object(pre, "preprocess");
    schema::reject_unknown(pre, {"crop_mode"}, "preprocess");
    if (pre.contains("crop_mode")) c.crop_mode = schema::boolean(pre["crop_mode"], "preprocess.crop_mode");
  }
  if (uses_op(c.policy, OpId::RandomCrop) && !c.crop_mode) {
    fail("preprocess.crop_mode", "must be true when random_crop is enabled");
  }
  if (!j.contains("io")) fail("io", "missing");
  const auto& io = j["io"];
  schema::require_object(io, "io");
  schema::reject_unknown(io, {"input_manifest", "output_dir", "format"}, "io");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  if (!io.contains("input_manifest")) fail("io.input_manifest", "missing");
  c.input_manifest = resolve(schema::string(io["input_manifest"], "io.input_manifest"));
  if (!io.contains("output_dir")) fail("io.output_dir", "missing");
  c.output_dir = resolve(schema::string(io["output_dir"], "io.output_dir"));
  if (io.contains("format")) {
    c.format = schema::string(io["format"], "io.format");
    if (c.format != "png8") fail("io.format", "only png8 is supported");
  }
  if (j.contains("workers")) {
    c.workers = schema::unsigned_integer(j["workers"], "workers");
    if (c.workers < 1) fail("workers", "must be >= 1");
  }
  if (j.contains("variants_per_sample")) {
    c.variants_per_sample = schema::unsigned_integer(j["variants_per_sample"], "variants_per_sample");
    if (c.variants_per_sample < 1) fail("variants_per_sample", "must be >= 1");
  }
  return c;
}

/// Loads a config file and applies the FANFORGE_SEED override when set.
inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open config " + path.string(), path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what(), "<root>");
  }
  RunConfig c = parse_run_config(j, path.parent_path());
  if (const char* env = std::getenv(kSeedEnvVar); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (*end != '\0' || env[0] == '-') {
      throw Error(ErrorCode::SchemaError, std::string(kSeedEnvVar) + " is not an unsigned integer",
                  kSeedEnvVar);
    }
    c.global_seed = v;
  }
  return c;
}

}  // namespace fanforge

#endif  // FANFORGE_CONFIG_HPP
