#pragma once

#include <atomic>
#include <limits>
#include <span>
#include <vector>

#include "plahx/grounding.hpp"

namespace plahx {

using Cost = int;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

inline Cost add_costs(Cost g, Cost h) {
  return h == kInfiniteCost ? kInfiniteCost : g + h;
}

// min(current, candidate); monotone non-increasing under any interleaving
inline Cost update_global_bound(Cost current, Cost candidate) {
  return candidate < current ? candidate : current;
}

// Shared incumbent bound with atomic-min publication. Readers take a
// snapshot; a stale larger snapshot only weakens pruning.
class GlobalBound {
 public:
  explicit GlobalBound(Cost initial = kInfiniteCost) : value_(initial) {}

  Cost snapshot() const { return value_.load(std::memory_order_relaxed); }

  void publish(Cost candidate) {
    Cost cur = value_.load(std::memory_order_relaxed);
    while (candidate < cur &&
           !value_.compare_exchange_weak(cur, candidate,
                                         std::memory_order_relaxed)) {
    }
  }

 private:
  std::atomic<Cost> value_;
};

// Fast-forward heuristic over a fixed action subset: relaxed planning graph
// to fixpoint, then backward relaxed-plan extraction taking the
// earliest-layer achiever, ties broken by lowest action id.
class FfEvaluator {
 public:
  FfEvaluator(const GroundedTask& task, std::span<const int> subspace);

  // 0 iff goal ⊆ state; kInfiniteCost iff some goal atom is unreachable
  // under delete relaxation; otherwise the extracted relaxed plan length.
  Cost evaluate(const AtomSet& state, const AtomSet& goal);

 private:
  const GroundedTask* task_;
  std::vector<int> actions_;            // subspace action ids, given order
  std::vector<std::vector<int>> achievers_;  // atom id -> subspace positions
  // per-evaluation scratch
  std::vector<Cost> fact_level_;
  std::vector<Cost> action_level_;
  std::vector<char> selected_;
  std::vector<char> queued_;
};

Cost ff_heuristic(const AtomSet& state, const AtomSet& goal,
                  const GroundedTask& task, std::span<const int> subspace);

struct LocalResult {
  std::vector<std::vector<int>> plans;  // goal hits, discovery order
  long nodes_expanded = 0;
  Cost best_f = kInfiniteCost;          // min f among found plans
  Cost h_init = kInfiniteCost;
};

// Best-first search on f = g + h restricted to `subspace`. A node is
// expanded only while its f is strictly below `bound_snapshot`; every goal
// state popped under the bound contributes a candidate plan. Duplicate
// states are re-opened only with strictly smaller g. Deterministic given
// (subspace order, bound_snapshot, budget): ties break on lower f, then
// lower h, then insertion order.
LocalResult astar_subspace(const GroundedTask& task,
                           std::span<const int> subspace, Cost bound_snapshot,
                           long budget);

}  // namespace plahx
