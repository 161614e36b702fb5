#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "flockfab/baseline.hpp"
#include "flockfab/engine.hpp"
#include "flockfab/metrics.hpp"

namespace flockfab {
namespace {

RunResult with_lots(const std::vector<std::pair<Tick, Tick>>& finish_and_wait, Tick rpt) {
  RunResult r;
  LotId id = 0;
  for (const auto& [finish, wait] : finish_and_wait) r.lots.push_back(LotRecord{id++, 0, finish, wait, rpt});
  return r;
}

TEST(Metrics, Makespan) {
  EXPECT_EQ(makespan(with_lots({{10, 0}, {20, 0}, {15, 0}}, 1)), 20);
  EXPECT_EQ(makespan(with_lots({{84, 0}}, 84)), 84);
}

TEST(Metrics, FlowFactor) {
  EXPECT_DOUBLE_EQ(flow_factor(with_lots({{84, 0}}, 84)), 1.0);
  EXPECT_DOUBLE_EQ(flow_factor(with_lots({{168, 84}}, 84)), 2.0);
}

TEST(Metrics, FlowFactorReadingsAgreeForUniformRpt) {
  const auto r = with_lots({{100, 16}, {90, 6}, {84, 0}}, 84);
  EXPECT_NEAR(flow_factor(r), flow_factor_pooled(r), 1e-12);

  RunResult mixed;
  mixed.lots.push_back(LotRecord{0, 0, 0, 10, 10});
  mixed.lots.push_back(LotRecord{1, 0, 0, 0, 30});
  EXPECT_DOUBLE_EQ(flow_factor(mixed), 1.5);
  EXPECT_DOUBLE_EQ(flow_factor_pooled(mixed), 50.0 / 40.0);
}

TEST(Metrics, FlowFactorFromMeanQueueTime) {
  // Mean queue time 168.97 ticks over an 84-tick raw process time.
  EXPECT_NEAR((168.97 + 84.0) / 84.0, 3.01, 5e-3);
}

TEST(Metrics, Tardiness) {
  EXPECT_DOUBLE_EQ(tardiness(with_lots({{1, 0}, {1, 0}, {1, 0}}, 1)), 0.0);
  EXPECT_DOUBLE_EQ(tardiness(with_lots({{1, 10}, {1, 20}}, 1)), 15.0);
}

TEST(Metrics, Utilization) {
  RunResult r = with_lots({{10, 0}}, 10);
  r.machines.push_back(MachineRecord{{0, 0}, 10, 10, 1});
  EXPECT_DOUBLE_EQ(utilization(r), 1.0);
  r.machines.push_back(MachineRecord{{0, 1}, 10, 0, 0});
  EXPECT_DOUBLE_EQ(utilization(r), 0.5);
}

TEST(Metrics, Histogram) {
  const auto bins = finish_histogram(with_lots({{5, 0}, {9, 0}, {10, 0}}, 1), 10);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0], (std::pair<Tick, std::size_t>{0, 2}));
  EXPECT_EQ(bins[1], (std::pair<Tick, std::size_t>{10, 1}));
  EXPECT_TRUE(finish_histogram(RunResult{}, 10).empty());
  EXPECT_THROW(finish_histogram(RunResult{}, 0), ConfigError);
}

TEST(Metrics, MergeHistogramPadsShorterSide) {
  std::vector<std::pair<Tick, std::size_t>> pooled;
  merge_histogram(pooled, finish_histogram(with_lots({{25, 0}}, 1), 10));
  merge_histogram(pooled, finish_histogram(with_lots({{3, 0}, {12, 0}}, 1), 10));
  ASSERT_EQ(pooled.size(), 3u);
  EXPECT_EQ(pooled[0], (std::pair<Tick, std::size_t>{0, 1}));
  EXPECT_EQ(pooled[1], (std::pair<Tick, std::size_t>{10, 1}));
  EXPECT_EQ(pooled[2], (std::pair<Tick, std::size_t>{20, 1}));
}

TEST(Metrics, SmallFabRunProperties) {
  const auto r = simulate(build_small_fab(), BaselinePolicy{}, 3);
  const auto m = summarize(r);
  EXPECT_GE(m.flow_factor, 1.0);
  EXPECT_GT(m.utilization, 0.0);
  EXPECT_LE(m.utilization, 1.0);
  EXPECT_NEAR(m.flow_factor, (m.tardiness + 84.0) / 84.0, 1e-9);

  double busy = 0;
  for (const auto& mr : r.machines) busy += static_cast<double>(mr.starts) * static_cast<double>(mr.raw_process_ticks);
  EXPECT_NEAR(m.utilization, busy / (19.0 * static_cast<double>(r.makespan)), 1e-12);

  for (const Tick w : {1, 3, 10, 50}) {
    std::size_t total = 0;
    for (const auto& [start, count] : finish_histogram(r, w)) total += count;
    EXPECT_EQ(total, 105u);
  }
}

}  // namespace
}  // namespace flockfab
