// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

// fanforge command line: batch augmentation, scan-mask extraction, preview
// grids, per-op benchmarks and metric-log ranking.
//
// Exit codes: 0 success, 1 per-sample failures, 2 invalid config/manifest/input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fanforge/fanforge.hpp"

namespace {

using namespace fanforge;

constexpr int kExitOk = 0;
constexpr int kExitSampleFailures = 1;
constexpr int kExitInvalid = 2;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::SchemaError:
    case ErrorCode::ParseError:
    case ErrorCode::DuplicateId:
    case ErrorCode::MissingFile:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NOutOfRange:
    case ErrorCode::ZeroBaseline:
      return kExitInvalid;
    default:
      return kExitSampleFailures;
  }
}

/// "all" or a comma-separated list of op names.
std::vector<TransformSpec> parse_op_list(const std::string& text) {
  if (text == "all") return default_op_set();
  std::vector<TransformSpec> specs;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto op = parse_op_name(name);
    if (!op) throw Error(ErrorCode::InvalidArgument, "unknown op '" + name + "'", name);
    specs.push_back(TransformSpec::defaults(*op));
  }
  if (specs.empty()) throw Error(ErrorCode::InvalidArgument, "empty op list");
  return specs;
}

int run_augment(const std::string& config_path, std::size_t workers, bool dry_run) {
  RunConfig config = load_run_config(config_path);
  if (workers > 0) config.workers = workers;
  const auto entries = load_manifest(config.input_manifest, /*check_files=*/dry_run);
  const std::size_t planned = entries.size() * config.variants_per_sample;
  if (dry_run) {
    std::cout << "config ok: " << entries.size() << " entries x " << config.variants_per_sample
              << " variants = " << planned << " outputs -> " << config.output_dir.string()
              << " (seed " << config.global_seed << ", workers " << config.workers << ")\n";
    return kExitOk;
  }
  const BatchSummary summary = run_batch(config, entries);
  for (const auto& f : summary.failures) {
    std::cerr << "error: " << f.id << " variant " << f.variant << ": " << f.message << '\n';
  }
  std::cout << "processed=" << summary.processed << " errored=" << summary.errored
            << " wall_time_s=" << summary.wall_time_s << '\n';
  return summary.errored > 0 ? kExitSampleFailures : kExitOk;
}

int run_mask(const std::string& manifest_path, const std::string& out_dir, double threshold,
             int closing) {
  MaskGenParams params;
  params.intensity_threshold = threshold;
  params.closing_radius = closing;
  const auto entries = load_manifest(manifest_path);
  const fs::path out(out_dir);
  fs::create_directories(out);
  std::ofstream listing(out / "manifest.jsonl", std::ios::trunc);
  std::size_t failures = 0;
  for (auto entry : entries) {
    try {
      const ScanMask mask = generate_scan_mask(read_image(entry.image_path), params);
      const fs::path mask_path = out / (entry.id + "_scan.png");
      write_png_u8(mask_path, mask);
      entry.scan_mask_path = fs::absolute(mask_path);
      entry.image_path = fs::absolute(entry.image_path);
      if (entry.label_mask_path) entry.label_mask_path = fs::absolute(*entry.label_mask_path);
      listing << to_json(entry).dump() << '\n';
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "error: " << entry.id << ": " << e.what() << '\n';
    }
  }
  std::cout << "masks=" << entries.size() - failures << " errored=" << failures << '\n';
  return failures > 0 ? kExitSampleFailures : kExitOk;
}

int run_preview(const std::string& image_path, const std::string& ops_text, std::size_t variants,
                std::uint64_t seed, const std::string& out_path) {
  const auto ops = parse_op_list(ops_text);
  Sample sample;
  sample.id = fs::path(image_path).stem().string();
  sample.image = read_image(image_path);
  try {
    sample.scan_mask = generate_scan_mask(sample.image);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyMask) throw;
  }
  emit_preview_grid(sample, ops, variants, out_path, seed);
  std::cout << "wrote " << out_path << " (" << ops.size() << " rows x " << variants + 1
            << " columns)\n";
  return kExitOk;
}

int run_bench(std::size_t reps, const std::string& ops_text) {
  const auto ops = parse_op_list(ops_text);
  const auto rows = bench(ops, reps);
  write_bench_report(std::cout, rows);
  return kExitOk;
}

int run_rank(const std::string& metrics_path, const std::string& baseline,
             const std::string& out_path, std::size_t top) {
  std::ifstream in(metrics_path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + metrics_path, metrics_path);
  const auto stats = summarize_runs(read_metric_log(in));
  const auto rows = rank_against_baseline(stats, baseline, top);
  std::ofstream out(out_path, std::ios::trunc);
  write_ranking_csv(out, rows);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fanforge: deterministic ultrasound image augmentation"};
  app.require_subcommand(1);

  auto* augment = app.add_subcommand("augment", "Augment a manifest as described by a run config");
  std::string config_path;
  std::size_t workers = 0;
  bool dry_run = false;
  augment->add_option("--config", config_path, "Run config (JSON)")->required();
  augment->add_option("--workers", workers, "Override the config's worker count")
      ->check(CLI::PositiveNumber);
  augment->add_flag("--dry-run", dry_run, "Validate config and manifest without writing");

  auto* mask = app.add_subcommand("mask", "Generate scan masks for every manifest entry");
  std::string manifest_path, mask_out;
  double threshold = MaskGenParams{}.intensity_threshold;
  int closing = MaskGenParams{}.closing_radius;
  mask->add_option("--manifest", manifest_path, "Input manifest (JSONL)")->required();
  mask->add_option("--out", mask_out, "Output directory")->required();
  mask->add_option("--threshold", threshold, "Normalized intensity threshold");
  mask->add_option("--closing", closing, "Closing disk radius in pixels");

  auto* preview = app.add_subcommand("preview", "Render a grid of augmented variants");
  std::string preview_image, preview_ops = "all", preview_out;
  std::size_t variants = 3;
  std::uint64_t preview_seed = 0;
  preview->add_option("--image", preview_image, "Input PNG")->required();
  preview->add_option("--ops", preview_ops, "Comma-separated op names or 'all'");
  preview->add_option("--variants", variants, "Variants per op")->check(CLI::PositiveNumber);
  preview->add_option("--seed", preview_seed, "Seed");
  preview->add_option("--out", preview_out, "Output PNG")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Per-op latency at 224x224");
  std::size_t reps = 100;
  std::string bench_ops = "all";
  bench_cmd->add_option("--reps", reps, "Repetitions per op (>= 30)");
  bench_cmd->add_option("--ops", bench_ops, "Comma-separated op names or 'all'");

  auto* rank = app.add_subcommand("rank", "Rank augmentations from a metric log");
  std::string metrics_path, baseline = "none", rank_out;
  std::size_t top = 0;
  rank->add_option("--metrics", metrics_path, "CSV with augmentation,run_id,metric")->required();
  rank->add_option("--baseline", baseline, "Name of the no-augmentation rows");
  rank->add_option("--out", rank_out, "Output CSV")->required();
  rank->add_option("--top", top, "Keep only the top N rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*augment) return run_augment(config_path, workers, dry_run);
    if (*mask) return run_mask(manifest_path, mask_out, threshold, closing);
    if (*preview) return run_preview(preview_image, preview_ops, variants, preview_seed, preview_out);
    if (*bench_cmd) return run_bench(reps, bench_ops);
    if (*rank) return run_rank(metrics_path, baseline, rank_out, top);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}
