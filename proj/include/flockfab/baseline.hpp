#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "flockfab/core.hpp"
#include "flockfab/policy.hpp"
#include "flockfab/rng.hpp"

namespace flockfab {

namespace detail {

/// Uniform pick from a nonempty candidate list. A single candidate costs no draw.
template <class T>
T pick_uniform(const std::vector<T>& candidates, Rng& rng) {
  if (candidates.size() == 1) return candidates.front();
  return candidates[rng.uniform_index(candidates.size())];
}

/// Indices in [0, n) minimising key(i).
template <class Key>
std::vector<std::size_t> argmin_indices(std::size_t n, Key key) {
  std::vector<std::size_t> best;
  auto best_key = std::numeric_limits<decltype(key(std::size_t{0}))>::max();
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = key(i);
    if (k < best_key) {
      best_key = k;
      best.clear();
    }
    if (k == best_key) best.push_back(i);
  }
  return best;
}

}  // namespace detail

/// Shortest queue in a single-step workcenter, ties uniform.
inline std::size_t baseline_choose_single(const Lot& /*lot*/, const WorkcenterView& wc, Rng& rng) {
  const auto shortest =
      detail::argmin_indices(wc.machine_count(), [&](std::size_t i) { return queue_total_len(wc.queue(i)); });
  return detail::pick_uniform(shortest, rng);
}

/// Join the partial batch of the lot's type with the fewest missing lots
/// anywhere in the workcenter; with no such batch, open a new one at the
/// machine with the shortest overall queue.
inline Placement baseline_choose_batch(const Lot& lot, const WorkcenterView& wc, Rng& rng) {
  const int bs = wc.type().batch_size;
  std::vector<Placement> best;
  int best_missing = std::numeric_limits<int>::max();
  for (std::size_t m = 0; m < wc.machine_count(); ++m) {
    const auto& batches = wc.queue(m).batches;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      if (batches[b].lot_type != lot.lot_type) continue;
      const int missing = batch_missing(batches[b], bs);
      if (missing <= 0) continue;
      if (missing < best_missing) {
        best_missing = missing;
        best.clear();
      }
      if (missing == best_missing) best.push_back(Placement{m, b});
    }
  }
  if (!best.empty()) return detail::pick_uniform(best, rng);

  const auto shortest =
      detail::argmin_indices(wc.machine_count(), [&](std::size_t i) { return queue_total_len(wc.queue(i)); });
  return Placement{detail::pick_uniform(shortest, rng), std::nullopt};
}

/// FIFO: removes and returns the head.
inline std::optional<LotId> baseline_take_single(std::size_t /*machine*/, std::vector<LotId>& queue,
                                                 const WorkcenterView& /*wc*/, Rng& /*rng*/) {
  if (queue.empty()) return std::nullopt;
  const LotId head = queue.front();
  queue.erase(queue.begin());
  return head;
}

/// A full batch if one exists (uniform among several); otherwise the fullest
/// partial once WT has expired; otherwise wait (nullopt).
inline std::optional<Batch> baseline_take_batch(std::size_t /*machine*/, MultiQueue& queue,
                                                const WorkcenterView& wc, Rng& rng, bool wt_expired) {
  auto& batches = queue.batches;
  if (batches.empty()) return std::nullopt;
  const int bs = wc.type().batch_size;

  std::vector<std::size_t> full;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    if (batch_missing(batches[b], bs) <= 0) full.push_back(b);
  }

  std::optional<std::size_t> chosen;
  if (!full.empty()) {
    chosen = detail::pick_uniform(full, rng);
  } else if (wt_expired) {
    const auto fullest =
        detail::argmin_indices(batches.size(), [&](std::size_t b) { return batch_missing(batches[b], bs); });
    chosen = detail::pick_uniform(fullest, rng);
  }
  if (!chosen) return std::nullopt;

  Batch taken = std::move(batches[*chosen]);
  batches.erase(batches.begin() + static_cast<std::ptrdiff_t>(*chosen));
  return taken;
}

struct BaselinePolicy {
  std::string_view name() const { return "baseline"; }

  Placement choose_queue(const Lot& lot, const WorkcenterView& wc, Rng& rng) const {
    if (wc.type().is_batch()) return baseline_choose_batch(lot, wc, rng);
    return Placement{baseline_choose_single(lot, wc, rng), std::nullopt};
  }

  std::optional<LotId> take_single(std::size_t machine, std::vector<LotId>& queue, const WorkcenterView& wc,
                                   Rng& rng) const {
    return baseline_take_single(machine, queue, wc, rng);
  }

  std::optional<Batch> take_batch(std::size_t machine, MultiQueue& queue, const WorkcenterView& wc, Rng& rng,
                                  bool wt_expired) const {
    return baseline_take_batch(machine, queue, wc, rng, wt_expired);
  }
};

static_assert(SchedulingPolicy<BaselinePolicy>);

}  // namespace flockfab
