#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "flockfab/baseline.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace flockfab {
namespace {

using testing::WorkcenterFixture;

WorkcenterFixture single_with_lengths(const std::vector<int>& lengths) {
  WorkcenterFixture f(lengths.size());
  for (std::size_t m = 0; m < lengths.size(); ++m) {
    for (int k = 0; k < lengths[m]; ++k) f.enqueue(m, 9);
  }
  return f;
}

TEST(BaselineChooseSingle, ShortestQueue) {
  auto f = single_with_lengths({3, 1, 2});
  const LotId lot = f.new_lot(0);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(baseline_choose_single(f.lots[lot], f.view(), rng), 1u);
}

TEST(BaselineChooseSingle, SingleMachine) {
  auto f = single_with_lengths({4});
  const LotId lot = f.new_lot(0);
  Rng rng(1);
  EXPECT_EQ(baseline_choose_single(f.lots[lot], f.view(), rng), 0u);
}

TEST(BaselineChooseSingle, TiesUniform) {
  auto f = single_with_lengths({2, 2, 2});
  const LotId lot = f.new_lot(0);
  Rng rng(7);
  std::vector<std::size_t> counts(3, 0);
  for (int i = 0; i < 9000; ++i) ++counts[baseline_choose_single(f.lots[lot], f.view(), rng)];
  EXPECT_GT(testing::chi_square_p_value(counts), 0.001);
}

TEST(BaselineChooseBatch, JoinsLeastMissing) {
  WorkcenterFixture f(2, MachineKind::Batch, 4);
  f.add_batch(0, 1, 2);
  f.add_batch(1, 1, 3);
  const LotId lot = f.new_lot(1);
  Rng rng(1);
  EXPECT_EQ(baseline_choose_batch(f.lots[lot], f.view(), rng), (Placement{1, 0}));
}

TEST(BaselineChooseBatch, IgnoresFullAndForeignBatches) {
  WorkcenterFixture f(2, MachineKind::Batch, 4);
  f.add_batch(0, 1, 4);  // full, same type
  f.add_batch(0, 2, 3);  // other type
  f.add_batch(1, 1, 1);
  const LotId lot = f.new_lot(1);
  Rng rng(1);
  EXPECT_EQ(baseline_choose_batch(f.lots[lot], f.view(), rng), (Placement{1, 0}));
}

TEST(BaselineChooseBatch, NewBatchAtShortestOverallQueue) {
  WorkcenterFixture f(2, MachineKind::Batch, 4);
  f.add_batch(0, 2, 4);
  f.add_batch(0, 3, 2);
  f.add_batch(1, 2, 2);
  const LotId lot = f.new_lot(1);
  Rng rng(1);
  EXPECT_EQ(baseline_choose_batch(f.lots[lot], f.view(), rng), (Placement{1, std::nullopt}));
}

TEST(BaselineChooseBatch, PartialInBusyMachineQueueIsJoinable) {
  WorkcenterFixture f(2, MachineKind::Batch, 4);
  f.set_processing(0, 5, 4);
  f.add_batch(0, 1, 2);
  const LotId lot = f.new_lot(1);
  Rng rng(1);
  EXPECT_EQ(baseline_choose_batch(f.lots[lot], f.view(), rng), (Placement{0, 0}));
}

TEST(BaselineChooseBatch, EqualPartialsUniform) {
  WorkcenterFixture f(2, MachineKind::Batch, 4);
  f.add_batch(0, 1, 3);
  f.add_batch(1, 1, 3);
  const LotId lot = f.new_lot(1);
  Rng rng(3);
  std::vector<std::size_t> counts(2, 0);
  for (int i = 0; i < 10000; ++i) ++counts[baseline_choose_batch(f.lots[lot], f.view(), rng).machine];
  EXPECT_GT(testing::chi_square_p_value(counts), 0.001);
}

TEST(BaselineTakeSingle, FifoHead) {
  std::vector<LotId> queue{10, 11, 12};
  WorkcenterFixture f(1);
  Rng rng(1);
  EXPECT_EQ(baseline_take_single(0, queue, f.view(), rng), LotId{10});
  EXPECT_EQ(queue, (std::vector<LotId>{11, 12}));

  std::vector<LotId> one{5};
  EXPECT_EQ(baseline_take_single(0, one, f.view(), rng), LotId{5});
  EXPECT_TRUE(one.empty());
  EXPECT_EQ(baseline_take_single(0, one, f.view(), rng), std::nullopt);
}

WorkcenterFixture batch_queue(const std::vector<std::size_t>& sizes, int bs = 4) {
  WorkcenterFixture f(1, MachineKind::Batch, bs);
  for (std::size_t i = 0; i < sizes.size(); ++i) f.add_batch(0, static_cast<LotType>(i), sizes[i]);
  return f;
}

TEST(BaselineTakeBatch, FullBatchFirst) {
  auto f = batch_queue({4, 2});
  Rng rng(1);
  const auto b = baseline_take_batch(0, f.queues[0], f.view(), rng, false);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->size(), 4u);
  EXPECT_EQ(f.queues[0].batches.size(), 1u);
}

TEST(BaselineTakeBatch, FullestAtExpiry) {
  auto f = batch_queue({2, 3});
  Rng rng(1);
  const auto b = baseline_take_batch(0, f.queues[0], f.view(), rng, true);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->size(), 3u);
}

TEST(BaselineTakeBatch, WaitsBeforeExpiry) {
  auto f = batch_queue({2, 3});
  Rng rng(1);
  EXPECT_EQ(baseline_take_batch(0, f.queues[0], f.view(), rng, false), std::nullopt);
  EXPECT_EQ(f.queues[0].batches.size(), 2u);
}

TEST(BaselineTakeBatch, EmptyQueueWaitsEvenWhenExpired) {
  auto f = batch_queue({});
  Rng rng(1);
  EXPECT_EQ(baseline_take_batch(0, f.queues[0], f.view(), rng, true), std::nullopt);
}

TEST(BaselineTakeBatch, EqualFullnessUniform) {
  std::vector<std::size_t> counts(2, 0);
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    auto f = batch_queue({3, 3});
    const auto b = baseline_take_batch(0, f.queues[0], f.view(), rng, true);
    ++counts[static_cast<std::size_t>(b->lot_type)];
  }
  EXPECT_GT(testing::chi_square_p_value(counts), 0.001);
}

TEST(BaselineTakeSingle, PreservesOrderOfRemainingLots) {
  Rng rng(5);
  WorkcenterFixture f(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LotId> queue(1 + rng.uniform_index(20));
    for (auto& id : queue) id = static_cast<LotId>(rng.uniform_index(1000));
    const auto before = queue;
    const auto taken = baseline_take_single(0, queue, f.view(), rng);
    ASSERT_TRUE(taken);
    EXPECT_EQ(*taken, before.front());
    EXPECT_TRUE(std::equal(queue.begin(), queue.end(), before.begin() + 1, before.end()));
  }
}

TEST(BaselineChooseBatch, NeverOpensSecondPartialOfAType) {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    WorkcenterFixture f(1 + rng.uniform_index(4), MachineKind::Batch, 4);
    const LotType t = static_cast<LotType>(rng.uniform_index(3));
    bool partial_exists = false;
    for (std::size_t m = 0; m < f.machines.size(); ++m) {
      for (LotType other = 0; other < 3; ++other) {
        if (rng.uniform_index(2)) continue;
        const std::size_t size = 1 + rng.uniform_index(4);
        f.add_batch(m, other, size);
        if (other == t && size < 4) partial_exists = true;
      }
    }
    const LotId lot = f.new_lot(t);
    const Placement p = baseline_choose_batch(f.lots[lot], f.view(), rng);
    EXPECT_EQ(p.join_batch.has_value(), partial_exists);
    if (p.join_batch) {
      const Batch& b = f.queues[p.machine].batches[*p.join_batch];
      EXPECT_EQ(b.lot_type, t);
      EXPECT_LT(b.size(), 4u);
    }
  }
}

}  // namespace
}  // namespace flockfab
