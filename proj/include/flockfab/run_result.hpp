#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "flockfab/core.hpp"

namespace flockfab {

struct LotRecord {
  LotId id = 0;
  LotType lot_type = 0;
  Tick finish_time = 0;
  Tick total_queue_ticks = 0;
  Tick rpt_ticks = 0;

  friend bool operator==(const LotRecord&, const LotRecord&) = default;
};

struct MachineRecord {
  MachineId id;
  Tick raw_process_ticks = 0;
  Tick busy_ticks_total = 0;
  std::size_t starts = 0;

  friend bool operator==(const MachineRecord&, const MachineRecord&) = default;
};

/// Everything one finished run reports. Lots are ordered by id, machines by
/// (type, index).
struct RunResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<LotRecord> lots;
  std::vector<MachineRecord> machines;
  Tick makespan = 0;

  std::size_t machine_count() const { return machines.size(); }

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Canonical text dump, used to compare runs byte for byte.
inline std::string to_text(const RunResult& r) {
  std::ostringstream out;
  out << "algorithm " << r.algorithm << "\nseed " << r.seed << "\nmakespan " << r.makespan << '\n';
  for (const auto& lot : r.lots) {
    out << "lot " << lot.id << ' ' << lot.lot_type << ' ' << lot.finish_time << ' ' << lot.total_queue_ticks << ' '
        << lot.rpt_ticks << '\n';
  }
  for (const auto& m : r.machines) {
    out << "machine " << m.id.type << '.' << m.id.index << ' ' << m.busy_ticks_total << ' ' << m.starts << '\n';
  }
  return out.str();
}

}  // namespace flockfab
