#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "flockfab/core.hpp"
#include "flockfab/rng.hpp"

namespace flockfab {

/// Where a lot goes in a workcenter. For batch workcenters `join_batch`
/// names an existing batch in the chosen queue; empty means open a new batch.
struct Placement {
  std::size_t machine = 0;
  std::optional<std::size_t> join_batch;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// The two decision points a scheduling policy implements.
///
/// * choose_queue: a lot picks a queue in the workcenter of its next step.
/// * take_single: an idle single-step machine removes the lot it will process
///   from its own queue (and may reorder that queue first).
/// * take_batch: an idle batch machine removes a batch from its multi-queue,
///   or returns nullopt to wait.
///
/// Policies keep no state between calls beyond their configuration.
template <class P>
concept SchedulingPolicy =
    requires(const P policy, const Lot& lot, const WorkcenterView& wc, Rng& rng,
             std::vector<LotId>& queue, MultiQueue& multi_queue, std::size_t machine, bool wt_expired) {
      { policy.name() } -> std::convertible_to<std::string_view>;
      { policy.choose_queue(lot, wc, rng) } -> std::same_as<Placement>;
      { policy.take_single(machine, queue, wc, rng) } -> std::same_as<std::optional<LotId>>;
      { policy.take_batch(machine, multi_queue, wc, rng, wt_expired) } -> std::same_as<std::optional<Batch>>;
    };

}  // namespace flockfab
