// Copyright Contributors to the fanforge project.
// SPDX-License-Identifier: Apache-2.0

#ifndef FANFORGE_RANKING_HPP
#define FANFORGE_RANKING_HPP

// Per-augmentation metric summaries and the ranking built on them: relative
// improvement over the no-augmentation baseline, the effective / ineffective /
// harmful split by the baseline's standard error, and Top-N op sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fanforge/error.hpp"
#include "fanforge/policy.hpp"

namespace fanforge {

struct AugStats {
  std::string name;
  double mean = 0.0;
  double sem = 0.0;
  std::size_t n = 1;
};

/// Mean and standard error (sample standard deviation / sqrt(n)) of a set of
/// runs. A single run has SEM 0.
inline AugStats summarize(std::string name, std::span<const double> runs) {
  if (runs.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no runs to summarize", name);
  }
  const double n = static_cast<double>(runs.size());
  const double mean = std::accumulate(runs.begin(), runs.end(), 0.0) / n;
  double sem = 0.0;
  if (runs.size() > 1) {
    double ss = 0.0;
    for (double v : runs) ss += (v - mean) * (v - mean);
    sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return {std::move(name), mean, sem, runs.size()};
}

/// 100 (aug - base) / base, in percent.
inline double relative_improvement(double aug_mean, double base_mean) {
  if (!(base_mean > 0.0)) {
    throw Error(ErrorCode::ZeroBaseline, "baseline mean must be positive");
  }
  return 100.0 * (aug_mean - base_mean) / base_mean;
}

enum class Effect { Effective, Ineffective, Harmful };

inline constexpr std::string_view to_string(Effect e) noexcept {
  switch (e) {
    case Effect::Effective: return "effective";
    case Effect::Ineffective: return "ineffective";
    case Effect::Harmful: return "harmful";
  }
  return "ineffective";
}

/// Effective above baseline.mean + baseline.sem, harmful below
/// baseline.mean - baseline.sem, ineffective within the band (inclusive).
inline Effect classify_effect(const AugStats& aug, const AugStats& baseline) noexcept {
  if (aug.mean > baseline.mean + baseline.sem) return Effect::Effective;
  if (aug.mean < baseline.mean - baseline.sem) return Effect::Harmful;
  return Effect::Ineffective;
}

/// Descending mean; equal means ordered by name.
inline std::vector<AugStats> rank_by_mean(std::span<const AugStats> stats) {
  std::vector<AugStats> ranked(stats.begin(), stats.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const AugStats& a, const AugStats& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.name < b.name;
  });
  return ranked;
}

/// The n highest-mean augmentations as op specs with default ranges. Names
/// must be op identifiers.
inline std::vector<TransformSpec> top_n_set(std::span<const AugStats> stats, std::size_t n) {
  if (n < 1 || n > stats.size()) {
    throw Error(ErrorCode::NOutOfRange,
                "n=" + std::to_string(n) + " outside [1, " + std::to_string(stats.size()) + "]");
  }
  const auto ranked = rank_by_mean(stats);
  std::vector<TransformSpec> specs;
  specs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto op = parse_op_name(ranked[i].name);
    if (!op) {
      throw Error(ErrorCode::InvalidArgument, "unknown augmentation name", ranked[i].name);
    }
    specs.push_back(TransformSpec::defaults(*op));
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Metric logs
// ---------------------------------------------------------------------------

struct MetricRow {
  std::string augmentation;
  std::string run_id;
  double metric = 0.0;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace detail

/// Reads `augmentation,run_id,metric` rows (header line required).
inline std::vector<MetricRow> read_metric_log(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "metric log is empty", {}, 1);
  ++line_no;
  const auto header = detail::split_csv_line(line);
  if (header != std::vector<std::string>{"augmentation", "run_id", "metric"}) {
    throw Error(ErrorCode::ParseError, "expected header augmentation,run_id,metric", {}, 1);
  }
  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(ErrorCode::ParseError, "expected 3 fields", {}, line_no);
    }
    MetricRow row{fields[0], fields[1], 0.0};
    std::size_t used = 0;
    try {
      row.metric = std::stod(fields[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != fields[2].size() || !std::isfinite(row.metric)) {
      throw Error(ErrorCode::ParseError, "metric is not a number", {}, line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Groups runs by augmentation (first-seen order) and summarizes each group.
inline std::vector<AugStats> summarize_runs(std::span<const MetricRow> rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> groups;
  for (const auto& row : rows) {
    auto [it, inserted] = groups.try_emplace(row.augmentation);
    if (inserted) order.push_back(row.augmentation);
    it->second.push_back(row.metric);
  }
  std::vector<AugStats> stats;
  for (const auto& name : order) stats.push_back(summarize(name, groups[name]));
  return stats;
}

struct RankRow {
  AugStats stats;
  double delta_pct = 0.0;
  Effect category = Effect::Ineffective;
  std::size_t rank = 0;
};

/// Ranks every non-baseline augmentation against the row named `baseline`.
/// `top` = 0 keeps all rows.
inline std::vector<RankRow> rank_against_baseline(std::span<const AugStats> stats,
                                                  std::string_view baseline,
                                                  std::size_t top = 0) {
  const auto base = std::find_if(stats.begin(), stats.end(),
                                 [&](const AugStats& s) { return s.name == baseline; });
  if (base == stats.end()) {
    throw Error(ErrorCode::InvalidArgument, "baseline rows not found", std::string(baseline));
  }
  std::vector<AugStats> others;
  for (const auto& s : stats) {
    if (s.name != baseline) others.push_back(s);
  }
  if (top > others.size()) {
    throw Error(ErrorCode::NOutOfRange, "top exceeds the number of augmentations");
  }
  const auto ranked = rank_by_mean(others);
  const std::size_t keep = top == 0 ? ranked.size() : top;
  std::vector<RankRow> rows;
  for (std::size_t i = 0; i < keep; ++i) {
    rows.push_back({ranked[i], relative_improvement(ranked[i].mean, base->mean),
                    classify_effect(ranked[i], *base), i + 1});
  }
  return rows;
}

inline void write_ranking_csv(std::ostream& out, std::span<const RankRow> rows) {
  out << "augmentation,mean,sem,delta_pct,category,rank\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.3f,%s,%zu\n", row.stats.name.c_str(),
                  row.stats.mean, row.stats.sem, row.delta_pct,
                  std::string(to_string(row.category)).c_str(), row.rank);
    out << buf;
  }
}

}  // namespace fanforge

#endif  // FANFORGE_RANKING_HPP
