#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flockfab/core.hpp"
#include "flockfab/policy.hpp"
#include "flockfab/rng.hpp"
#include "flockfab/run_result.hpp"
#include "flockfab/scenario.hpp"

namespace flockfab {

/// Raised when a run stops making progress.
class SimulationAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EngineOptions {
  /// Abort when no lot has finished for horizon_factor x (sum of all lots'
  /// raw process ticks) ticks.
  Tick horizon_factor = 100;
};

/// Optional hooks for tests and tracing. All are called synchronously.
struct EngineObserver {
  /// Single-step take: queue before the take, queue after, and the lot taken.
  std::function<void(MachineId, std::span<const LotId>, std::span<const LotId>, LotId)> on_take_single;
  /// Batch start with the WT flag the decision was made under.
  std::function<void(MachineId, const Batch&, bool wt_expired)> on_start_batch;
  /// After phase 5 of every tick.
  std::function<void(Tick clock)> on_tick_end;
};

struct Workcenter {
  MachineType type;
  std::vector<Machine> machines;
  std::vector<MultiQueue> queues;
};

/// One replication: a tick-driven plant with a fixed policy and seed.
///
/// Each tick runs five phases in this order:
///   1. busy machines count down; those reaching zero release their lots;
///   2. released lots advance; finished lots are recorded, the rest choose
///      their next queue in random order;
///   3. idle machines, in random order, try to start (single-step machines
///      take one lot, batch machines take a batch or wait);
///   4. WT timers of idle batch machines with waiting lots are armed or
///      counted down;
///   5. the clock advances and busy machines accrue one busy tick.
template <SchedulingPolicy Policy>
class Simulation {
 public:
  Simulation(const Scenario& scenario, Policy policy, std::uint64_t seed, EngineOptions options = {})
      : policy_(std::move(policy)), rng_(seed), seed_(seed), recipes_(scenario.recipes()), options_(options) {
    scenario.validate();
    for (const auto& mt : scenario.machine_types) {
      Workcenter wc{mt, {}, {}};
      for (int i = 0; i < mt.machine_count; ++i) {
        const MachineId id{mt.id, static_cast<std::size_t>(i)};
        Machine machine;
        machine.id = id;
        wc.machines.push_back(std::move(machine));
        MultiQueue queue;
        queue.owner = id;
        wc.queues.push_back(std::move(queue));
      }
      workcenters_.push_back(std::move(wc));
    }

    for (const auto& lt : scenario.lot_types) {
      const Tick rpt = scenario.recipe_ticks(lt.recipe);
      for (int k = 0; k < lt.count; ++k) {
        Lot lot;
        lot.id = static_cast<LotId>(lots_.size());
        lot.lot_type = lt.id;
        lot.rpt_ticks = rpt;
        total_rpt_ += rpt;
        lots_.push_back(lot);
      }
    }

    std::vector<LotId> order(lots_.size());
    std::iota(order.begin(), order.end(), LotId{0});
    rng_.shuffle(std::span<LotId>(order));
    for (const LotId id : order) dispatch(id);
  }

  void set_observer(EngineObserver observer) { observer_ = std::move(observer); }

  Tick clock() const { return clock_; }
  bool done() const { return finished_.size() == lots_.size(); }
  const std::vector<Workcenter>& workcenters() const { return workcenters_; }
  const std::vector<Lot>& lots() const { return lots_; }
  const std::vector<std::pair<LotId, Tick>>& finished() const { return finished_; }
  const Policy& policy() const { return policy_; }

  WorkcenterView view(MachineTypeId m) const {
    const Workcenter& wc = workcenters_[m];
    return WorkcenterView(wc.type, wc.machines, wc.queues, lots_);
  }

  void tick() {
    release_finished_machines();
    dispatch_released();
    start_idle_machines();
    update_wt_timers();
    advance_clock();
  }

  RunResult run_to_completion() {
    while (!done()) tick();
    return result();
  }

  RunResult result() const {
    RunResult r;
    r.algorithm = std::string(policy_.name());
    r.seed = seed_;
    for (const auto& lot : lots_) {
      r.lots.push_back(LotRecord{lot.id, lot.lot_type, lot.finish_time.value_or(0), lot.total_queue_ticks,
                                 lot.rpt_ticks});
      if (lot.finish_time) r.makespan = std::max(r.makespan, *lot.finish_time);
    }
    for (const auto& wc : workcenters_) {
      for (const auto& m : wc.machines) {
        r.machines.push_back(MachineRecord{m.id, wc.type.raw_process_ticks, m.busy_ticks_total, m.starts});
      }
    }
    return r;
  }

  /// Throws std::logic_error if the plant state breaks a model invariant:
  /// every lot in exactly one place, no mixed or oversized batches, at most
  /// one partial batch per type per queue, consistent busy state.
  void verify_invariants() const {
    std::vector<int> seen(lots_.size(), 0);
    const auto fail = [](const std::string& what) { throw std::logic_error("invariant violated: " + what); };
    for (const auto& wc : workcenters_) {
      const int bs = wc.type.batch_size;
      for (std::size_t i = 0; i < wc.machines.size(); ++i) {
        const Machine& m = wc.machines[i];
        if (m.busy() && (m.busy_remaining < 1 || m.current_batch.empty())) fail("busy machine without work");
        if (!m.busy() && !m.current_batch.empty()) fail("idle machine holding lots");
        if (static_cast<int>(m.current_batch.size()) > bs) fail("batch larger than batch size");
        for (const LotId id : m.current_batch) {
          ++seen[id];
          if (lots_[id].lot_type != lots_[m.current_batch.front()].lot_type) fail("mixed batch on machine");
        }
        const MultiQueue& q = wc.queues[i];
        if (wc.type.is_batch() && !q.lots.empty()) fail("batch queue holding loose lots");
        if (!wc.type.is_batch() && !q.batches.empty()) fail("single-step queue holding batches");
        for (const LotId id : q.lots) ++seen[id];
        std::vector<LotType> partial_types;
        for (const Batch& b : q.batches) {
          if (b.lots.empty() || static_cast<int>(b.size()) > bs) fail("queued batch size out of bounds");
          if (static_cast<int>(b.size()) < bs) {
            if (std::find(partial_types.begin(), partial_types.end(), b.lot_type) != partial_types.end()) {
              fail("two partial batches of one type in a queue");
            }
            partial_types.push_back(b.lot_type);
          }
          for (const LotId id : b.lots) {
            ++seen[id];
            if (lots_[id].lot_type != b.lot_type) fail("mixed batch in queue");
          }
        }
      }
    }
    for (const auto& [id, t] : finished_) ++seen[id];
    for (std::size_t id = 0; id < seen.size(); ++id) {
      if (seen[id] != 1) fail("lot " + std::to_string(id) + " found in " + std::to_string(seen[id]) + " places");
    }
  }

 private:
  void dispatch(LotId id) {
    Lot& lot = lots_[id];
    const MachineTypeId m = *next_step(lot, recipes_);
    Workcenter& wc = workcenters_[m];
    const Placement placement = policy_.choose_queue(lot, view(m), rng_);
    MultiQueue& queue = wc.queues.at(placement.machine);
    lot.enqueue_time = clock_;

    if (!wc.type.is_batch()) {
      queue.lots.push_back(id);
      return;
    }
    auto joinable = [&](const Batch& b) {
      return b.lot_type == lot.lot_type && static_cast<int>(b.size()) < wc.type.batch_size;
    };
    if (placement.join_batch && *placement.join_batch < queue.batches.size() &&
        joinable(queue.batches[*placement.join_batch])) {
      queue.batches[*placement.join_batch].lots.push_back(id);
      return;
    }
    const auto it = std::find_if(queue.batches.begin(), queue.batches.end(), joinable);
    if (it != queue.batches.end()) {
      it->lots.push_back(id);
    } else {
      queue.batches.push_back(Batch{lot.lot_type, {id}});
    }
  }

  void release_finished_machines() {
    released_.clear();
    for (auto& wc : workcenters_) {
      for (auto& m : wc.machines) {
        if (!m.busy()) continue;
        if (--m.busy_remaining > 0) continue;
        released_.insert(released_.end(), m.current_batch.begin(), m.current_batch.end());
        m.current_batch.clear();
        m.state = MachineState::Idle;
      }
    }
  }

  void dispatch_released() {
    std::vector<LotId> moving;
    for (const LotId id : released_) {
      Lot& lot = lots_[id];
      ++lot.step_cursor;
      if (next_step(lot, recipes_)) {
        moving.push_back(id);
      } else {
        lot.finish_time = clock_;
        finished_.emplace_back(id, clock_);
        last_finish_ = clock_;
      }
    }
    rng_.shuffle(std::span<LotId>(moving));
    for (const LotId id : moving) dispatch(id);
  }

  void start_idle_machines() {
    std::vector<MachineId> idle;
    for (const auto& wc : workcenters_) {
      for (const auto& m : wc.machines) {
        if (!m.busy()) idle.push_back(m.id);
      }
    }
    rng_.shuffle(std::span<MachineId>(idle));

    for (const MachineId id : idle) {
      Workcenter& wc = workcenters_[id.type];
      Machine& machine = wc.machines[id.index];
      MultiQueue& queue = wc.queues[id.index];
      if (queue.empty()) continue;

      if (!wc.type.is_batch()) {
        std::vector<LotId> before;
        if (observer_.on_take_single) before = queue.lots;
        const auto taken = policy_.take_single(id.index, queue.lots, view(id.type), rng_);
        if (!taken) continue;
        if (observer_.on_take_single) observer_.on_take_single(id, before, queue.lots, *taken);
        start(wc, machine, {*taken});
      } else {
        const bool expired = wc.type.wt_ticks == 0 || (machine.wt_remaining && *machine.wt_remaining <= 0);
        auto batch = policy_.take_batch(id.index, queue, view(id.type), rng_, expired);
        if (!batch) continue;
        if (batch->lots.empty()) throw std::logic_error("policy returned an empty batch");
        if (observer_.on_start_batch) observer_.on_start_batch(id, *batch, expired);
        start(wc, machine, std::move(batch->lots));
      }
    }
  }

  void start(Workcenter& wc, Machine& machine, std::vector<LotId> lots) {
    machine.state = MachineState::Busy;
    machine.busy_remaining = wc.type.raw_process_ticks;
    machine.wt_remaining.reset();
    ++machine.starts;
    for (const LotId id : lots) {
      Lot& lot = lots_[id];
      lot.total_queue_ticks += clock_ - lot.enqueue_time;
    }
    machine.current_batch = std::move(lots);
  }

  void update_wt_timers() {
    for (auto& wc : workcenters_) {
      if (!wc.type.is_batch()) continue;
      const int bs = wc.type.batch_size;
      for (std::size_t i = 0; i < wc.machines.size(); ++i) {
        Machine& m = wc.machines[i];
        if (m.busy()) continue;
        const MultiQueue& q = wc.queues[i];
        if (q.empty()) {
          m.wt_remaining.reset();
          continue;
        }
        if (!m.wt_remaining) m.wt_remaining = wc.type.wt_ticks;
        const bool has_full = std::any_of(q.batches.begin(), q.batches.end(),
                                          [&](const Batch& b) { return batch_missing(b, bs) <= 0; });
        if (!has_full && *m.wt_remaining > 0) --*m.wt_remaining;
      }
    }
  }

  void advance_clock() {
    ++clock_;
    for (auto& wc : workcenters_) {
      for (auto& m : wc.machines) {
        if (m.busy()) ++m.busy_ticks_total;
      }
    }
    if (observer_.on_tick_end) observer_.on_tick_end(clock_);
    const Tick horizon = options_.horizon_factor * std::max<Tick>(total_rpt_, 1);
    if (!done() && clock_ - last_finish_ > horizon) {
      throw SimulationAbort("no lot finished within " + std::to_string(horizon) + " ticks (clock " +
                            std::to_string(clock_) + ", " + std::to_string(finished_.size()) + "/" +
                            std::to_string(lots_.size()) + " lots finished)");
    }
  }

  Policy policy_;
  Rng rng_;
  std::uint64_t seed_;
  RecipeTable recipes_;
  EngineOptions options_;
  EngineObserver observer_;
  std::vector<Workcenter> workcenters_;
  std::vector<Lot> lots_;
  std::vector<std::pair<LotId, Tick>> finished_;
  std::vector<LotId> released_;
  Tick clock_ = 0;
  Tick last_finish_ = 0;
  Tick total_rpt_ = 0;
};

template <SchedulingPolicy Policy>
Simulation<Policy> init_run(const Scenario& scenario, Policy policy, std::uint64_t seed, EngineOptions options = {}) {
  return Simulation<Policy>(scenario, std::move(policy), seed, options);
}

/// Builds, runs and reports one replication.
template <SchedulingPolicy Policy>
RunResult simulate(const Scenario& scenario, Policy policy, std::uint64_t seed, EngineOptions options = {}) {
  Simulation<Policy> sim(scenario, std::move(policy), seed, options);
  return sim.run_to_completion();
}

}  // namespace flockfab
