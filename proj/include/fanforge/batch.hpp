// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_BATCH_HPP
#define FANFORGE_BATCH_HPP

// Deterministic parallel batch engine. Variant v of manifest entry i is
// augmented with seed derive_sample_seed(global_seed, i * variants + v), so
// output bytes depend only on the config and the inputs, never on the worker
// count or scheduling. Each task writes only its own files; results are
// gathered per index and reduced in index order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fanforge/config.hpp"
#include "fanforge/io.hpp"

namespace fanforge {

struct SampleFailure {
  std::string id;
  std::size_t variant = 0;
  std::string message;
};

struct BatchSummary {
  std::size_t processed = 0;
  std::size_t errored = 0;
  double wall_time_s = 0.0;
  std::vector<SampleFailure> failures;
};

/// Seed of variant `variant` of the entry at `index`.
inline std::uint64_t variant_seed(std::uint64_t global_seed, std::size_t index,
                                  std::size_t variants, std::size_t variant) {
  return derive_sample_seed(global_seed, static_cast<std::uint64_t>(index) * variants + variant);
}

/// Output file stem, relative to the output directory.
inline std::filesystem::path output_stem(const ManifestEntry& entry, std::size_t variant) {
  return std::filesystem::path(std::string(to_string(entry.split))) /
         (entry.id + "_v" + std::to_string(variant));
}

/// Writes the image and any masks of `sample` next to each other:
/// <stem>.png, <stem>_scan.png, <stem>_label.png. Masks hold raw ids.
inline ManifestEntry write_sample(const Sample& sample, const std::filesystem::path& root,
                                  const std::filesystem::path& stem) {
  ManifestEntry out;
  out.id = stem.filename().string();
  out.image_path = stem.string() + ".png";
  std::filesystem::create_directories((root / out.image_path).parent_path());
  write_image(root / out.image_path, sample.image);
  if (sample.scan_mask) {
    out.scan_mask_path = stem.string() + "_scan.png";
    write_png_u8(root / *out.scan_mask_path, *sample.scan_mask);
  }
  if (sample.label_mask) {
    out.label_mask_path = stem.string() + "_label.png";
    write_png_u8(root / *out.label_mask_path, sample.label_mask->ids);
  }
  out.label = sample.label;
  return out;
}

namespace detail {

struct EntryOutcome {
  std::vector<std::optional<ManifestEntry>> written;  // per variant
  std::vector<SampleFailure> failures;
};

inline EntryOutcome process_entry(const ManifestEntry& entry, std::size_t index,
                                  const RunConfig& config, const CompiledTransform& transform) {
  EntryOutcome outcome;
  outcome.written.resize(config.variants_per_sample);
  std::optional<Sample> source;
  try {
    source = load_sample(entry);
  } catch (const std::exception& e) {
    for (std::size_t v = 0; v < config.variants_per_sample; ++v) {
      outcome.failures.push_back({entry.id, v, e.what()});
    }
    return outcome;
  }
  for (std::size_t v = 0; v < config.variants_per_sample; ++v) {
    try {
      Sample s = *source;
      s.seed = variant_seed(config.global_seed, index, config.variants_per_sample, v);
      s = transform(std::move(s));
      const auto stem = output_stem(entry, v);
      auto written = write_sample(s, config.output_dir, stem);
      written.split = entry.split;
      outcome.written[v] = std::move(written);
    } catch (const std::exception& e) {
      outcome.failures.push_back({entry.id, v, e.what()});
    }
  }
  return outcome;
}

}  // namespace detail

/// Runs the batch described by `config` over `entries`. Per-sample failures
/// are recorded in the summary and never abort the run. Successful outputs
/// are listed, in index order, in <output_dir>/augmented.jsonl (itself a
/// valid manifest).
inline BatchSummary run_batch(const RunConfig& config, const std::vector<ManifestEntry>& entries) {
  const auto start = std::chrono::steady_clock::now();
  const CompiledTransform transform = config.transform();
  std::filesystem::create_directories(config.output_dir);
  for (Split s : {Split::Train, Split::Val, Split::Test}) {
    const bool used = std::any_of(entries.begin(), entries.end(),
                                  [s](const ManifestEntry& e) { return e.split == s; });
    if (used) std::filesystem::create_directories(config.output_dir / std::string(to_string(s)));
  }

  std::vector<detail::EntryOutcome> outcomes(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < entries.size(); i = next.fetch_add(1)) {
      outcomes[i] = detail::process_entry(entries[i], i, config, transform);
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(config.workers, entries.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  BatchSummary summary;
  std::ofstream listing(config.output_dir / "augmented.jsonl", std::ios::trunc);
  for (const auto& outcome : outcomes) {
    for (const auto& w : outcome.written) {
      if (!w) continue;
      ++summary.processed;
      listing << to_json(*w).dump() << '\n';
    }
    summary.errored += outcome.failures.size();
    summary.failures.insert(summary.failures.end(), outcome.failures.begin(),
                            outcome.failures.end());
  }
  if (!listing) throw Error(ErrorCode::IoError, "cannot write augmented.jsonl");
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

/// Loads the manifest named by the config (file existence is checked per
/// sample, so a broken path shows up as one failed sample) and runs it.
inline BatchSummary run_batch(const RunConfig& config) {
  return run_batch(config, load_manifest(config.input_manifest, /*check_files=*/false));
}

}  // namespace fanforge

#endif  // FANFORGE_BATCH_HPP
