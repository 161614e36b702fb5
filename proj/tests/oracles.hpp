#pragma once

// Test-only reference computations. Nothing here calls into the engine or the
// policies; they are the independent side of the checks that use them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "flockfab/rng.hpp"
#include "flockfab/scenario.hpp"

namespace flockfab::testing {

struct MicroOutcome {
  Tick makespan = 0;
  std::vector<Tick> waits;  // sorted

  friend auto operator<=>(const MicroOutcome&, const MicroOutcome&) = default;
};

/// Every outcome reachable in a single-step workcenter where all `lots` lots
/// arrive at tick 0, each joins one of the shortest queues (all tie branches
/// explored), and machines serve their queues back to back from tick 0.
inline std::set<MicroOutcome> enumerate_shortest_queue_outcomes(int machines, int lots, Tick rpt) {
  std::set<MicroOutcome> outcomes;
  std::vector<int> load(static_cast<std::size_t>(machines), 0);
  std::function<void(int)> assign = [&](int remaining) {
    if (remaining == 0) {
      MicroOutcome o;
      for (const int n : load) {
        for (int j = 0; j < n; ++j) {
          o.waits.push_back(rpt * j);
          o.makespan = std::max(o.makespan, rpt * (j + 1));
        }
      }
      std::sort(o.waits.begin(), o.waits.end());
      outcomes.insert(o);
      return;
    }
    const int shortest = *std::min_element(load.begin(), load.end());
    for (auto& n : load) {
      if (n != shortest) continue;
      ++n;
      assign(remaining - 1);
      --n;
    }
  };
  assign(lots);
  return outcomes;
}

/// Upper-tail probability of a chi-square statistic with `df` degrees of freedom.
inline double chi_square_p_value(const std::vector<std::size_t>& observed) {
  std::size_t total = 0;
  for (const auto c : observed) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(observed.size());
  double chi2 = 0;
  for (const auto c : observed) chi2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const double df = static_cast<double>(observed.size() - 1);
  return boost::math::gamma_q(df / 2.0, chi2 / 2.0);
}

/// Small random plant: up to 4 machine types (batch or single-step), up to 30 lots.
inline Scenario random_scenario(Rng& rng) {
  Scenario s;
  s.name = "random";
  const std::size_t types = 1 + rng.uniform_index(4);
  for (std::size_t m = 0; m < types; ++m) {
    MachineType mt;
    mt.id = m;
    mt.machine_count = 1 + static_cast<int>(rng.uniform_index(3));
    mt.raw_process_ticks = 1 + static_cast<Tick>(rng.uniform_index(6));
    if (rng.uniform_index(3) == 0) {
      mt.kind = MachineKind::Batch;
      mt.batch_size = 2 + static_cast<int>(rng.uniform_index(3));
      mt.wt_ticks = static_cast<Tick>(rng.uniform_index(5));
    }
    s.machine_types.push_back(mt);
  }
  const std::size_t lot_types = 1 + rng.uniform_index(4);
  int budget = static_cast<int>(rng.uniform_index(31));
  for (std::size_t t = 0; t < lot_types; ++t) {
    const int count = t + 1 == lot_types ? budget : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(budget) + 1));
    budget -= count;
    Recipe recipe;
    const std::size_t len = 1 + rng.uniform_index(6);
    for (std::size_t k = 0; k < len; ++k) recipe.steps.push_back(rng.uniform_index(types));
    s.lot_types.push_back(LotTypeSpec{static_cast<LotType>(t), count, recipe});
  }
  return s;
}

}  // namespace flockfab::testing
