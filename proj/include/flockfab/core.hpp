#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flockfab {

/// Simulation time. All durations inside the library are whole ticks.
using Tick = std::int64_t;
using LotId = std::uint32_t;
using LotType = int;
/// Machine types are numbered 0..N-1 and double as workcenter indices.
using MachineTypeId = std::size_t;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MachineKind { SingleStep, Batch };

struct MachineType {
  MachineTypeId id = 0;
  MachineKind kind = MachineKind::SingleStep;
  Tick raw_process_ticks = 1;
  int batch_size = 1;
  Tick wt_ticks = 0;
  int machine_count = 1;

  bool is_batch() const { return kind == MachineKind::Batch; }

  /// Throws ConfigError when the parameter combination is not a valid machine type.
  void validate() const {
    const std::string where = "machine type " + std::to_string(id) + ": ";
    if (raw_process_ticks < 1) throw ConfigError(where + "raw process time must be at least one tick");
    if (machine_count < 1) throw ConfigError(where + "machine count must be positive");
    if (wt_ticks < 0) throw ConfigError(where + "waiting time must be non-negative");
    if (kind == MachineKind::SingleStep) {
      if (batch_size != 1) throw ConfigError(where + "single-step machines have batch size 1");
      if (wt_ticks != 0) throw ConfigError(where + "single-step machines have no waiting time");
    } else if (batch_size < 2) {
      throw ConfigError(where + "batch machines need batch size >= 2");
    }
  }

  friend bool operator==(const MachineType&, const MachineType&) = default;
};

struct MachineId {
  MachineTypeId type = 0;
  std::size_t index = 0;

  friend auto operator<=>(const MachineId&, const MachineId&) = default;
};

enum class MachineState { Idle, Busy };

struct Machine {
  MachineId id;
  MachineState state = MachineState::Idle;
  Tick busy_remaining = 0;
  // Empty while the WT timer is inactive.
  std::optional<Tick> wt_remaining;
  std::vector<LotId> current_batch;
  Tick busy_ticks_total = 0;
  std::size_t starts = 0;

  bool busy() const { return state == MachineState::Busy; }
};

struct Recipe {
  std::vector<MachineTypeId> steps;

  std::size_t size() const { return steps.size(); }
  friend bool operator==(const Recipe&, const Recipe&) = default;
};

using RecipeTable = std::map<LotType, Recipe>;

struct Lot {
  LotId id = 0;
  LotType lot_type = 0;
  std::size_t step_cursor = 0;
  Tick enqueue_time = 0;
  Tick total_queue_ticks = 0;
  std::optional<Tick> finish_time;
  Tick rpt_ticks = 0;

  bool finished() const { return finish_time.has_value(); }
};

/// Lots of one type grouped for a batch machine; never mixed.
struct Batch {
  LotType lot_type = 0;
  std::vector<LotId> lots;

  std::size_t size() const { return lots.size(); }
  friend bool operator==(const Batch&, const Batch&) = default;
};

/// Dedicated queue of one machine. Single-step owners use `lots` (index 0 is
/// the head, position 1 in queue terms); batch owners use `batches`.
struct MultiQueue {
  MachineId owner;
  std::vector<LotId> lots;
  std::vector<Batch> batches;

  bool empty() const { return lots.empty() && batches.empty(); }
};

/// Machine type of the lot's next process step, or nullopt once the recipe is done.
inline std::optional<MachineTypeId> next_step(const Lot& lot, const RecipeTable& recipes) {
  const auto it = recipes.find(lot.lot_type);
  if (it == recipes.end()) {
    throw ConfigError("no recipe for lot type " + std::to_string(lot.lot_type));
  }
  const Recipe& recipe = it->second;
  if (lot.step_cursor >= recipe.size()) return std::nullopt;
  return recipe.steps[lot.step_cursor];
}

inline int batch_missing(const Batch& batch, int batch_size) {
  return batch_size - static_cast<int>(batch.size());
}

inline std::size_t queue_total_len(const MultiQueue& queue) {
  if (!queue.batches.empty()) {
    return std::accumulate(queue.batches.begin(), queue.batches.end(), std::size_t{0},
                           [](std::size_t acc, const Batch& b) { return acc + b.size(); });
  }
  return queue.lots.size();
}

/// Read-only picture of one workcenter at a decision instant.
class WorkcenterView {
 public:
  WorkcenterView(const MachineType& type, std::span<const Machine> machines,
                 std::span<const MultiQueue> queues, std::span<const Lot> lots)
      : type_(&type), machines_(machines), queues_(queues), lots_(lots) {}

  const MachineType& type() const { return *type_; }
  std::size_t machine_count() const { return machines_.size(); }
  const Machine& machine(std::size_t i) const { return machines_[i]; }
  const MultiQueue& queue(std::size_t i) const { return queues_[i]; }
  LotType lot_type(LotId id) const { return lots_[id].lot_type; }

  /// Lot type on the machine right now, if it is busy.
  std::optional<LotType> processing_type(std::size_t i) const {
    const Machine& m = machines_[i];
    if (!m.busy() || m.current_batch.empty()) return std::nullopt;
    return lot_type(m.current_batch.front());
  }

 private:
  const MachineType* type_;
  std::span<const Machine> machines_;
  std::span<const MultiQueue> queues_;
  std::span<const Lot> lots_;
};

}  // namespace flockfab
