#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plahx/bench.hpp"
#include "plahx/heuristic.hpp"
#include "test_support.hpp"

using namespace plahx;
using plahx::testing::action_id;
using plahx::testing::atom_id;

namespace {

GroundedTask two_block_task() {
  Domain domain = parse_domain(plahx::testing::blocks_domain_text());
  Problem problem =
      parse_problem(plahx::testing::two_block_problem_text(), domain);
  return ground(domain, problem);
}

std::vector<int> full_space(const GroundedTask& task) {
  std::vector<int> ids(task.actions.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

// Independent delete-relaxation fixpoint: plain iteration over the action
// list until no new atom appears.
AtomSet relaxed_reachable(const GroundedTask& task, const AtomSet& state,
                          std::span<const int> subspace) {
  AtomSet reached = state;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int id : subspace) {
      const GroundedAction& a = task.actions[id];
      if (!reached.is_superset_of(a.pre)) continue;
      for (int add : a.add.ids()) {
        if (!reached.contains(add)) {
          reached.insert(add);
          changed = true;
        }
      }
    }
  }
  return reached;
}

}  // namespace

TEST_CASE("ff is zero exactly when the goal is already satisfied") {
  GroundedTask task = two_block_task();
  AtomSet goal(task.atom_count());
  goal.insert(atom_id(task, "(ontable b1)"));
  CHECK(ff_heuristic(task.init, goal, task, full_space(task)) == 0);
  CHECK(ff_heuristic(task.init, task.goal, task, full_space(task)) != 0);
}

TEST_CASE("ff counts the extracted relaxed plan") {
  GroundedTask task = two_block_task();
  AtomSet holding(task.atom_count());
  holding.insert(atom_id(task, "(holding b1)"));
  CHECK(ff_heuristic(task.init, holding, task, full_space(task)) == 1);
  // stack goal needs pick-up then stack under relaxation as well
  CHECK(ff_heuristic(task.init, task.goal, task, full_space(task)) == 2);
}

TEST_CASE("ff is infinite when a goal atom has no achiever in the subspace") {
  GroundedTask task = two_block_task();
  // without (stack b1 b2) nothing adds on(b1,b2)
  std::vector<int> subspace;
  for (const GroundedAction& a : task.actions)
    if (a.name() != "(stack b1 b2)") subspace.push_back(a.id);
  CHECK(ff_heuristic(task.init, task.goal, task, subspace) == kInfiniteCost);
  CHECK(ff_heuristic(task.init, task.goal, task, std::vector<int>{}) ==
        kInfiniteCost);
}

TEST_CASE("ff agrees with an independent relaxed fixpoint on reachability") {
  std::vector<TaskInstance> instances =
      generate_instances(DomainKind::Blocks, 3, {}, 11);
  Domain domain = parse_domain(plahx::testing::blocks_domain_text());
  Rng rng(13);
  for (const TaskInstance& instance : instances) {
    Problem problem = parse_problem(instance.problem_text, domain);
    GroundedTask task = ground(domain, problem);
    for (int round = 0; round < 40; ++round) {
      // random subspace
      std::vector<int> subspace;
      for (const GroundedAction& a : task.actions)
        if (rng.uniform01() < 0.5) subspace.push_back(a.id);
      // random goal atom set
      AtomSet goal(task.atom_count());
      for (int i = 0; i < 2; ++i)
        goal.insert(static_cast<int>(rng.index(task.atom_count())));
      Cost h = ff_heuristic(task.init, goal, task, subspace);
      AtomSet reached = relaxed_reachable(task, task.init, subspace);
      CHECK((h == kInfiniteCost) == !reached.is_superset_of(goal));
      CHECK((h == 0) == task.init.is_superset_of(goal));
    }
  }
}

TEST_CASE("full-space search matches the breadth-first optimum") {
  GroundedTask task = two_block_task();
  LocalResult result =
      astar_subspace(task, full_space(task), kInfiniteCost, 100000);
  REQUIRE(!result.plans.empty());
  CHECK(result.best_f == 2);
  OracleResult oracle = bfs_oracle(task);
  REQUIRE(oracle.solvable);
  CHECK(result.best_f == oracle.length);
  // the best plan revalidates
  std::vector<int> best;
  for (const std::vector<int>& plan : result.plans)
    if (best.empty() || plan.size() < best.size()) best = plan;
  CHECK(validate_plan(task, best).kind == ValidationOutcome::Kind::Success);
  CHECK(best == std::vector<int>{action_id(task, "(pick-up b1)"),
                                 action_id(task, "(stack b1 b2)")});
}

TEST_CASE("full-space search matches the oracle across generated instances") {
  for (DomainKind kind : {DomainKind::Blocks, DomainKind::Rearrangement}) {
    Domain domain = parse_domain(domain_text(kind));
    for (const TaskInstance& instance : generate_instances(kind, 4, {}, 99)) {
      Problem problem = parse_problem(instance.problem_text, domain);
      GroundedTask task = ground(domain, problem);
      LocalResult result =
          astar_subspace(task, full_space(task), kInfiniteCost, 1000000);
      REQUIRE(!result.plans.empty());
      CHECK(result.best_f == instance.optimal_length);
    }
  }
}

TEST_CASE("a zero bound prunes the root") {
  GroundedTask task = two_block_task();
  LocalResult result = astar_subspace(task, full_space(task), 0, 100000);
  CHECK(result.plans.empty());
  CHECK(result.nodes_expanded == 0);
}

TEST_CASE("bound snapshots prune plans at or above the bound") {
  GroundedTask task = two_block_task();
  LocalResult at_bound = astar_subspace(task, full_space(task), 2, 100000);
  CHECK(at_bound.plans.empty());  // optimum is 2; strict inequality prunes it
  LocalResult above = astar_subspace(task, full_space(task), 3, 100000);
  REQUIRE(!above.plans.empty());
  CHECK(above.best_f == 2);
}

TEST_CASE("a subspace without goal achievers yields an empty result") {
  GroundedTask task = two_block_task();
  std::vector<int> subspace;
  for (const GroundedAction& a : task.actions)
    if (a.schema_name != "stack") subspace.push_back(a.id);
  LocalResult result = astar_subspace(task, subspace, kInfiniteCost, 100000);
  CHECK(result.plans.empty());
  CHECK(result.h_init == kInfiniteCost);
  CHECK(result.nodes_expanded == 0);
}

TEST_CASE("budget caps expansions") {
  GroundedTask task = two_block_task();
  LocalResult result = astar_subspace(task, full_space(task), kInfiniteCost, 1);
  CHECK(result.nodes_expanded <= 1);
}

TEST_CASE("expansions stay near the reachable state count") {
  GroundedTask task = two_block_task();
  LocalResult result =
      astar_subspace(task, full_space(task), kInfiniteCost, 1000000);
  long reachable = reachable_state_count(task, 100000);
  // re-openings are possible but cannot run away
  CHECK(result.nodes_expanded <= 2 * reachable);
}

TEST_CASE("update_global_bound takes the minimum") {
  CHECK(update_global_bound(kInfiniteCost, 7) == 7);
  CHECK(update_global_bound(5, 7) == 5);
  CHECK(update_global_bound(5, 3) == 3);
}

TEST_CASE("GlobalBound publishes atomic minima") {
  GlobalBound bound;
  CHECK(bound.snapshot() == kInfiniteCost);
  bound.publish(9);
  bound.publish(12);
  bound.publish(4);
  CHECK(bound.snapshot() == 4);
}

TEST_CASE("search is deterministic for a fixed setup") {
  GroundedTask task = two_block_task();
  LocalResult a = astar_subspace(task, full_space(task), kInfiniteCost, 50000);
  LocalResult b = astar_subspace(task, full_space(task), kInfiniteCost, 50000);
  CHECK(a.plans == b.plans);
  CHECK(a.nodes_expanded == b.nodes_expanded);
}
