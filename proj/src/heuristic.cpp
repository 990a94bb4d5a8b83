#include "plahx/heuristic.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace plahx {

namespace {
constexpr Cost kUnreached = -1;
}

FfEvaluator::FfEvaluator(const GroundedTask& task, std::span<const int> subspace)
    : task_(&task),
      actions_(subspace.begin(), subspace.end()),
      achievers_(task.atom_count()),
      fact_level_(task.atom_count(), kUnreached),
      action_level_(actions_.size(), kUnreached),
      selected_(actions_.size(), 0),
      queued_(task.atom_count(), 0) {
  for (std::size_t pos = 0; pos < actions_.size(); ++pos)
    for (int atom : task.actions[actions_[pos]].add.ids())
      achievers_[atom].push_back(static_cast<int>(pos));
}

Cost FfEvaluator::evaluate(const AtomSet& state, const AtomSet& goal) {
  if (state.is_superset_of(goal)) return 0;

  std::fill(fact_level_.begin(), fact_level_.end(), kUnreached);
  std::fill(action_level_.begin(), action_level_.end(), kUnreached);
  for (int id : state.ids()) fact_level_[id] = 0;

  const std::vector<int> goal_ids = goal.ids();

  // relaxed planning graph to fixpoint; new facts buffered per layer so an
  // action never fires on facts introduced in its own layer
  std::vector<int> fresh;
  for (Cost level = 0;; ++level) {
    fresh.clear();
    for (std::size_t pos = 0; pos < actions_.size(); ++pos) {
      if (action_level_[pos] != kUnreached) continue;
      const GroundedAction& action = task_->actions[actions_[pos]];
      bool ready = true;
      for (int p : action.pre.ids()) {
        if (fact_level_[p] == kUnreached) {
          ready = false;
          break;
        }
      }
      if (!ready) continue;
      action_level_[pos] = level;
      for (int a : action.add.ids())
        if (fact_level_[a] == kUnreached) fresh.push_back(a);
    }
    if (fresh.empty()) break;
    for (int a : fresh)
      if (fact_level_[a] == kUnreached) fact_level_[a] = level + 1;
    bool all_goals = true;
    for (int g : goal_ids)
      if (fact_level_[g] == kUnreached) all_goals = false;
    if (all_goals) break;
  }

  Cost max_level = 0;
  for (int g : goal_ids) {
    if (fact_level_[g] == kUnreached) return kInfiniteCost;
    max_level = std::max(max_level, fact_level_[g]);
  }

  // backward extraction
  std::fill(selected_.begin(), selected_.end(), 0);
  std::fill(queued_.begin(), queued_.end(), 0);
  std::vector<std::vector<int>> needed(static_cast<std::size_t>(max_level) + 1);
  for (int g : goal_ids) {
    if (fact_level_[g] > 0 && !queued_[g]) {
      queued_[g] = 1;
      needed[fact_level_[g]].push_back(g);
    }
  }

  Cost plan_size = 0;
  for (Cost level = max_level; level >= 1; --level) {
    for (std::size_t n = 0; n < needed[level].size(); ++n) {
      int atom = needed[level][n];
      int best = -1;
      for (int pos : achievers_[atom]) {
        if (action_level_[pos] == kUnreached) continue;
        if (best == -1 ||
            action_level_[pos] < action_level_[best] ||
            (action_level_[pos] == action_level_[best] &&
             actions_[pos] < actions_[best]))
          best = pos;
      }
      // atom reached at `level` ⇒ some achiever fired at level-1
      if (selected_[best]) continue;
      selected_[best] = 1;
      ++plan_size;
      for (int p : task_->actions[actions_[best]].pre.ids()) {
        if (fact_level_[p] > 0 && !queued_[p]) {
          queued_[p] = 1;
          needed[fact_level_[p]].push_back(p);
        }
      }
    }
  }
  return plan_size;
}

Cost ff_heuristic(const AtomSet& state, const AtomSet& goal,
                  const GroundedTask& task, std::span<const int> subspace) {
  FfEvaluator eval(task, subspace);
  return eval.evaluate(state, goal);
}

namespace {

struct Node {
  AtomSet state;
  int parent;
  int action;
  Cost g;
};

struct OpenEntry {
  Cost f;
  Cost h;
  std::uint64_t seq;
  int node;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

std::vector<int> reconstruct(const std::deque<Node>& nodes, int node) {
  std::vector<int> plan;
  for (int cur = node; nodes[cur].parent >= 0; cur = nodes[cur].parent)
    plan.push_back(nodes[cur].action);
  std::reverse(plan.begin(), plan.end());
  return plan;
}

}  // namespace

LocalResult astar_subspace(const GroundedTask& task,
                           std::span<const int> subspace, Cost bound_snapshot,
                           long budget) {
  LocalResult result;
  FfEvaluator heuristic(task, subspace);
  result.h_init = heuristic.evaluate(task.init, task.goal);
  if (result.h_init == kInfiniteCost) return result;

  std::deque<Node> nodes;  // stable references under push_back
  nodes.push_back({task.init, -1, -1, 0});

  std::unordered_map<AtomSet, Cost, AtomSetHash> best_g;
  best_g.emplace(task.init, 0);

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::uint64_t seq = 0;
  open.push({result.h_init, result.h_init, seq++, 0});

  while (!open.empty()) {
    OpenEntry entry = open.top();
    if (entry.f >= bound_snapshot) break;  // min-f entry pruned ⇒ all pruned
    open.pop();

    const Node& node = nodes[entry.node];
    auto best = best_g.find(node.state);
    if (best != best_g.end() && best->second < node.g) continue;  // stale

    if (node.state.is_superset_of(task.goal)) {
      result.plans.push_back(reconstruct(nodes, entry.node));
      result.best_f = update_global_bound(result.best_f, entry.f);
      continue;  // extensions of a goal node are never shorter
    }

    if (result.nodes_expanded >= budget) break;
    ++result.nodes_expanded;

    for (int action_id : subspace) {
      const GroundedAction& action = task.actions[action_id];
      if (!applicable(node.state, action)) continue;
      AtomSet succ = node.state;
      succ.subtract(action.del);
      succ.unite(action.add);
      Cost g = node.g + 1;
      auto [it, fresh] = best_g.try_emplace(succ, g);
      if (!fresh) {
        if (it->second <= g) continue;  // re-open only on strictly smaller g
        it->second = g;
      }
      Cost h = heuristic.evaluate(succ, task.goal);
      if (h == kInfiniteCost) continue;
      nodes.push_back({std::move(succ), entry.node, action_id, g});
      open.push({add_costs(g, h), h, seq++,
                 static_cast<int>(nodes.size()) - 1});
    }
  }
  return result;
}

}  // namespace plahx
