#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "flockfab/baseline.hpp"
#include "flockfab/core.hpp"
#include "flockfab/policy.hpp"
#include "flockfab/rng.hpp"

namespace flockfab {

inline constexpr std::size_t kDefaultFlsqLen = 5;

/// Reshuffle directive for a lot in the first-lots window. Negative moves
/// toward the head (position 1), positive toward the back.
enum class Pull : int { TowardHead = -1, Stay = 0, TowardBack = 1 };

/// Separation: among the queues holding the fewest lots of this lot's type,
/// take the shortest; ties uniform.
inline std::size_t flocking_choose_single(const Lot& lot, const WorkcenterView& wc, Rng& rng) {
  const std::size_t n = wc.machine_count();
  std::vector<std::size_t> same_type(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& q = wc.queue(i).lots;
    same_type[i] = static_cast<std::size_t>(
        std::count_if(q.begin(), q.end(), [&](LotId id) { return wc.lot_type(id) == lot.lot_type; }));
  }
  const std::size_t fewest = *std::min_element(same_type.begin(), same_type.end());

  std::vector<std::size_t> best;
  std::size_t best_len = SIZE_MAX;
  for (std::size_t i = 0; i < n; ++i) {
    if (same_type[i] != fewest) continue;
    const std::size_t len = queue_total_len(wc.queue(i));
    if (len < best_len) {
      best_len = len;
      best.clear();
    }
    if (len == best_len) best.push_back(i);
  }
  return detail::pick_uniform(best, rng);
}

/// Distance of the nearest lot of type `t` at machine `other`: 0 when the
/// machine is processing that type, otherwise the 1-based position inside the
/// first `window` queue places. nullopt when neither holds.
inline std::optional<std::size_t> first_same_type_distance(LotType t, const WorkcenterView& wc, std::size_t other,
                                                           std::size_t window) {
  if (wc.processing_type(other) == t) return 0;
  const auto& q = wc.queue(other).lots;
  const std::size_t n = std::min(window, q.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (wc.lot_type(q[i]) == t) return i + 1;
  }
  return std::nullopt;
}

/// Compares the lot's own position with the mean of the other machines'
/// distances. Comparison is done in integers, so means like 1/3 are exact.
inline Pull compute_pull(std::size_t own_position, std::span<const std::size_t> other_distances) {
  if (other_distances.empty()) return Pull::Stay;
  const std::uint64_t sum = std::accumulate(other_distances.begin(), other_distances.end(), std::uint64_t{0});
  const std::uint64_t scaled_own = static_cast<std::uint64_t>(own_position) * other_distances.size();
  if (scaled_own > sum) return Pull::TowardHead;
  if (scaled_own < sum) return Pull::TowardBack;
  return Pull::Stay;
}

/// Distances from every machine except `self` that hold a lot of type `t`.
inline std::vector<std::size_t> other_distances(LotType t, const WorkcenterView& wc, std::size_t self,
                                                std::size_t window) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < wc.machine_count(); ++m) {
    if (m == self) continue;
    if (auto d = first_same_type_distance(t, wc, m, window)) out.push_back(*d);
  }
  return out;
}

/// Pulls for the first min(window, |queue|) lots of `queue`, owned by `self`.
inline std::vector<Pull> flsq_pulls(std::size_t self, std::span<const LotId> queue, const WorkcenterView& wc,
                                    std::size_t window) {
  const std::size_t n = std::min(window, queue.size());
  std::vector<Pull> pulls(n, Pull::Stay);
  for (std::size_t i = 0; i < n; ++i) {
    const auto distances = other_distances(wc.lot_type(queue[i]), wc, self, window);
    pulls[i] = compute_pull(i + 1, distances);
  }
  return pulls;
}

/// Applies precomputed pulls: lots of the window are visited in random order
/// and each moves one place in its pull direction, clamped to the window.
inline void apply_pulls(std::vector<LotId>& queue, std::span<const Pull> pulls, Rng& rng) {
  const std::size_t n = pulls.size();
  if (n < 2) return;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  const std::vector<LotId> original(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(n));
  for (const std::size_t k : order) {
    if (pulls[k] == Pull::Stay) continue;
    const LotId lot = original[k];
    const auto pos = static_cast<std::ptrdiff_t>(
        std::find(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(n), lot) - queue.begin());
    const std::ptrdiff_t target =
        std::clamp<std::ptrdiff_t>(pos + static_cast<int>(pulls[k]), 0, static_cast<std::ptrdiff_t>(n) - 1);
    if (target == pos) continue;
    queue.erase(queue.begin() + pos);
    queue.insert(queue.begin() + target, lot);
  }
}

/// Cohesion in time: reorders the first-lots window of the taking machine's queue.
inline void reshuffle_flsq(std::size_t self, std::vector<LotId>& queue, const WorkcenterView& wc, Rng& rng,
                           std::size_t window) {
  const auto pulls = flsq_pulls(self, queue, wc, window);
  apply_pulls(queue, pulls, rng);
}

inline std::optional<LotId> flocking_take_single(std::size_t self, std::vector<LotId>& queue,
                                                 const WorkcenterView& wc, Rng& rng, std::size_t window) {
  if (queue.empty()) return std::nullopt;
  reshuffle_flsq(self, queue, wc, rng, window);
  const LotId head = queue.front();
  queue.erase(queue.begin());
  return head;
}

/// Flocking at single-step workcenters; batch workcenters use the baseline rules unchanged.
struct FlockingPolicy {
  std::size_t flsq_len = kDefaultFlsqLen;

  std::string_view name() const { return "flocking"; }

  Placement choose_queue(const Lot& lot, const WorkcenterView& wc, Rng& rng) const {
    if (wc.type().is_batch()) return baseline_choose_batch(lot, wc, rng);
    return Placement{flocking_choose_single(lot, wc, rng), std::nullopt};
  }

  std::optional<LotId> take_single(std::size_t machine, std::vector<LotId>& queue, const WorkcenterView& wc,
                                   Rng& rng) const {
    return flocking_take_single(machine, queue, wc, rng, flsq_len);
  }

  std::optional<Batch> take_batch(std::size_t machine, MultiQueue& queue, const WorkcenterView& wc, Rng& rng,
                                  bool wt_expired) const {
    return baseline_take_batch(machine, queue, wc, rng, wt_expired);
  }
};

static_assert(SchedulingPolicy<FlockingPolicy>);

}  // namespace flockfab
