// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_BENCH_HPP
#define FANFORGE_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fanforge/policy.hpp"
#include "fanforge/stdaug.hpp"
#include "fanforge/synthetic.hpp"

namespace fanforge {

inline constexpr std::size_t kMinBenchRepetitions = 30;

struct BenchRow {
  std::string op;
  double mean_us = 0.0;
  double median_us = 0.0;
  std::size_t repetitions = 0;
  std::size_t rank = 0;  // 1 = slowest
};

/// Per-image latency of each op on a 224x224 synthetic fan (random_crop gets
/// the 256x256 input it crops from). Strengths are redrawn every repetition
/// from a fixed seed. Rows come back slowest first.
inline std::vector<BenchRow> bench(std::span<const TransformSpec> ops, std::size_t repetitions,
                                   std::uint64_t seed = 0) {
  if (repetitions < kMinBenchRepetitions) {
    throw Error(ErrorCode::InvalidArgument,
                "bench needs at least " + std::to_string(kMinBenchRepetitions) + " repetitions");
  }
  const Sample base = make_synthetic_fan(kModelSize, kModelSize, seed);
  const Sample crop_base = resize(base, kCropSourceSize, kCropSourceSize);

  std::vector<BenchRow> rows;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const TransformSpec& spec = ops[k];
    const Sample& input = spec.op == OpId::RandomCrop ? crop_base : base;
    std::vector<double> times;
    times.reserve(repetitions);
    for (std::size_t rep = 0; rep <= repetitions; ++rep) {
      Sample s = input;
      Rng rng(derive_sample_seed(seed, k * (repetitions + 1) + rep));
      const auto t0 = std::chrono::steady_clock::now();
      s = apply_transform(std::move(s), spec, rng);
      const auto t1 = std::chrono::steady_clock::now();
      if (rep == 0) continue;  // warm-up
      times.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
    BenchRow row;
    row.op = std::string(spec.name());
    row.repetitions = repetitions;
    double total = 0.0;
    for (double t : times) total += t;
    row.mean_us = total / static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    row.median_us = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BenchRow& a, const BenchRow& b) { return a.mean_us > b.mean_us; });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
  return rows;
}

inline void write_bench_report(std::ostream& out, std::span<const BenchRow> rows) {
  out << "rank,op,mean_us,median_us,repetitions\n";
  for (const auto& r : rows) {
    out << r.rank << ',' << r.op << ',' << r.mean_us << ',' << r.median_us << ',' << r.repetitions
        << '\n';
  }
}

}  // namespace fanforge

#endif  // FANFORGE_BENCH_HPP
