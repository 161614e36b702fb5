#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "flockfab/core.hpp"
#include "flockfab/run_result.hpp"

namespace flockfab {

struct MetricsSummary {
  double makespan = 0;     // ticks
  double flow_factor = 1;  // dimensionless
  double tardiness = 0;    // ticks
  double utilization = 0;  // fraction
};

inline Tick makespan(const RunResult& r) {
  Tick ms = 0;
  for (const auto& lot : r.lots) ms = std::max(ms, lot.finish_time);
  return ms;
}

/// Mean over lots of (qt + rpt) / rpt.
inline double flow_factor(const RunResult& r) {
  if (r.lots.empty()) return 1.0;
  double sum = 0;
  for (const auto& lot : r.lots) {
    if (lot.rpt_ticks <= 0) throw ConfigError("flow factor needs positive raw process time");
    sum += static_cast<double>(lot.total_queue_ticks + lot.rpt_ticks) / static_cast<double>(lot.rpt_ticks);
  }
  return sum / static_cast<double>(r.lots.size());
}

/// Ratio of sums, sum(qt + rpt) / sum(rpt). Equals flow_factor when all lots
/// share one raw process time.
inline double flow_factor_pooled(const RunResult& r) {
  double num = 0;
  double den = 0;
  for (const auto& lot : r.lots) {
    num += static_cast<double>(lot.total_queue_ticks + lot.rpt_ticks);
    den += static_cast<double>(lot.rpt_ticks);
  }
  if (den <= 0) return 1.0;
  return num / den;
}

/// Mean total queue time per lot.
inline double tardiness(const RunResult& r) {
  if (r.lots.empty()) return 0.0;
  double sum = 0;
  for (const auto& lot : r.lots) sum += static_cast<double>(lot.total_queue_ticks);
  return sum / static_cast<double>(r.lots.size());
}

/// Busy machine-ticks over machine count x makespan.
inline double utilization(const RunResult& r) {
  const Tick ms = makespan(r);
  if (ms <= 0 || r.machines.empty()) return 0.0;
  double busy = 0;
  for (const auto& m : r.machines) busy += static_cast<double>(m.busy_ticks_total);
  return busy / (static_cast<double>(r.machines.size()) * static_cast<double>(ms));
}

inline MetricsSummary summarize(const RunResult& r) {
  return MetricsSummary{static_cast<double>(makespan(r)), flow_factor(r), tardiness(r), utilization(r)};
}

/// Finish-time counts in bins [b*w, (b+1)*w), contiguous from 0 up to the
/// last occupied bin. Pairs are (bin start, count).
inline std::vector<std::pair<Tick, std::size_t>> finish_histogram(const RunResult& r, Tick bin_width = 10) {
  if (bin_width < 1) throw ConfigError("histogram bin width must be >= 1");
  std::vector<std::pair<Tick, std::size_t>> bins;
  for (const auto& lot : r.lots) {
    const auto b = static_cast<std::size_t>(lot.finish_time / bin_width);
    while (bins.size() <= b) bins.emplace_back(static_cast<Tick>(bins.size()) * bin_width, 0);
    ++bins[b].second;
  }
  return bins;
}

/// Adds `extra` into `into`, resizing as needed; both share one bin width.
inline void merge_histogram(std::vector<std::pair<Tick, std::size_t>>& into,
                            const std::vector<std::pair<Tick, std::size_t>>& extra) {
  while (into.size() < extra.size()) into.emplace_back(extra[into.size()].first, 0);
  for (std::size_t i = 0; i < extra.size(); ++i) into[i].second += extra[i].second;
}

}  // namespace flockfab
