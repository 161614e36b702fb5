#pragma once

#include <cstddef>
#include <vector>

#include "flockfab/core.hpp"
#include "flockfab/scenario.hpp"

namespace flockfab::testing {

/// Hand-built workcenter state for policy tests.
struct WorkcenterFixture {
  MachineType type;
  std::vector<Machine> machines;
  std::vector<MultiQueue> queues;
  std::vector<Lot> lots;

  explicit WorkcenterFixture(std::size_t machine_count, MachineKind kind = MachineKind::SingleStep,
                             int batch_size = 1) {
    type.id = 0;
    type.kind = kind;
    type.batch_size = batch_size;
    type.machine_count = static_cast<int>(machine_count);
    type.raw_process_ticks = 2;
    for (std::size_t i = 0; i < machine_count; ++i) {
      Machine m;
      m.id = MachineId{0, i};
      machines.push_back(m);
      MultiQueue q;
      q.owner = m.id;
      queues.push_back(q);
    }
  }

  LotId new_lot(LotType t) {
    Lot lot;
    lot.id = static_cast<LotId>(lots.size());
    lot.lot_type = t;
    lots.push_back(lot);
    return lot.id;
  }

  /// Appends a lot of type t to a single-step queue.
  LotId enqueue(std::size_t machine, LotType t) {
    const LotId id = new_lot(t);
    queues[machine].lots.push_back(id);
    return id;
  }

  /// Appends a batch of `size` lots of type t to a batch queue.
  void add_batch(std::size_t machine, LotType t, std::size_t size) {
    Batch b{t, {}};
    for (std::size_t k = 0; k < size; ++k) b.lots.push_back(new_lot(t));
    queues[machine].batches.push_back(b);
  }

  void set_processing(std::size_t machine, LotType t, std::size_t count = 1) {
    Machine& m = machines[machine];
    m.state = MachineState::Busy;
    m.busy_remaining = 1;
    for (std::size_t k = 0; k < count; ++k) m.current_batch.push_back(new_lot(t));
  }

  WorkcenterView view() const { return WorkcenterView(type, machines, queues, lots); }
};

/// One single-step workcenter with `machines` machines and `lots` lots of type 0.
inline Scenario single_workcenter(int machines, int lots, Tick rpt = 2) {
  Scenario s;
  s.name = "micro";
  MachineType mt;
  mt.id = 0;
  mt.machine_count = machines;
  mt.raw_process_ticks = rpt;
  s.machine_types.push_back(mt);
  s.lot_types.push_back(LotTypeSpec{0, lots, Recipe{{0}}});
  return s;
}

}  // namespace flockfab::testing
