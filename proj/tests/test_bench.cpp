#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "plahx/bench.hpp"
#include "test_support.hpp"

using namespace plahx;
namespace fs = std::filesystem;

TEST_CASE("blocks generator emits certified instances in the length window") {
  std::vector<TaskInstance> instances =
      generate_instances(DomainKind::Blocks, 10, {}, 1);
  REQUIRE(instances.size() == 10);
  Domain domain = parse_domain(domain_text(DomainKind::Blocks));
  for (const TaskInstance& inst : instances) {
    CHECK(inst.optimal_length >= 2);
    CHECK(inst.optimal_length <= 12);
    CHECK(!inst.instruction.empty());
    Problem problem = parse_problem(inst.problem_text, domain);
    GroundedTask task = ground(domain, problem);
    OracleResult oracle = bfs_oracle(task);
    REQUIRE(oracle.solvable);
    CHECK(oracle.length == inst.optimal_length);
    // gold abstraction reproduces the gold problem
    Abstraction abstraction = parse_abstraction(inst.abstraction_text);
    CHECK(embed_into_problem(abstraction, domain, inst.id) == problem);
  }
}

TEST_CASE("every suite respects its plan-length window") {
  const struct {
    DomainKind kind;
    int lo, hi;
  } windows[] = {{DomainKind::Blocks, 2, 12},
                 {DomainKind::Hanoi, 1, 3},
                 {DomainKind::Grippers, 4, 8},
                 {DomainKind::Rearrangement, 2, 4}};
  for (const auto& w : windows) {
    std::vector<TaskInstance> instances = generate_instances(w.kind, 5, {}, 2);
    REQUIRE(instances.size() == 5);
    for (const TaskInstance& inst : instances) {
      CHECK(inst.optimal_length >= w.lo);
      CHECK(inst.optimal_length <= w.hi);
    }
  }
}

TEST_CASE("a minimal hanoi instance is a single move") {
  std::vector<TaskInstance> instances =
      generate_instances(DomainKind::Hanoi, 1, {1, 1}, 3);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].optimal_length == 1);
  CHECK(instances[0].instruction.substr(0, 9) == "Move the ");
  CHECK(instances[0].instruction.find(" disk in rod ") != std::string::npos);
}

TEST_CASE("generator output is deterministic per seed") {
  auto a = generate_instances(DomainKind::Grippers, 4, {}, 9);
  auto b = generate_instances(DomainKind::Grippers, 4, {}, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].instruction == b[i].instruction);
    CHECK(a[i].problem_text == b[i].problem_text);
    CHECK(a[i].optimal_length == b[i].optimal_length);
  }
  auto c = generate_instances(DomainKind::Grippers, 4, {}, 10);
  bool all_same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (c[i].problem_text != a[i].problem_text) all_same = false;
  CHECK(!all_same);
}

TEST_CASE("count zero yields an empty instance list") {
  CHECK(generate_instances(DomainKind::Blocks, 0, {}, 1).empty());
}

TEST_CASE("classification maps traces to exactly one class") {
  PipelineTrace trace;
  trace.translation = TranslationOutcome::Kind::Success;
  trace.plan_found = true;
  trace.plan_revalidates = true;
  CHECK(classify_result(trace) == ResultClass::PlanSuccess);

  trace.plan_revalidates = false;
  CHECK(classify_result(trace) == ResultClass::PlanInvalidity);

  trace.plan_found = false;
  CHECK(classify_result(trace) == ResultClass::PlanInvalidity);

  trace.drift_flagged = true;
  CHECK(classify_result(trace) == ResultClass::DomainDrift);

  trace.translation = TranslationOutcome::Kind::SyntaxError;
  CHECK(classify_result(trace) == ResultClass::SyntaxError);
  trace.translation = TranslationOutcome::Kind::SemanticError;
  CHECK(classify_result(trace) == ResultClass::SemanticError);
  trace.translation = TranslationOutcome::Kind::ContextOverflow;
  CHECK(classify_result(trace) == ResultClass::ContextOverflow);
}

TEST_CASE("pscr evaluates the compression ratio verbatim") {
  CHECK(compute_pscr(20, 4, 4) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(compute_pscr(22.6, 20, 8.27) ==
        doctest::Approx(22.6 / (20.0 * 8.27)).epsilon(1e-9));
  CHECK(compute_pscr(37, 1, 37) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("aggregate computes rates, means, and the class histogram") {
  std::vector<RunRecord> records;
  for (int i = 0; i < 4; ++i) {
    RunRecord r;
    r.instance_id = "blocks-" + std::to_string(i);
    r.domain = "blocks";
    r.result_class = i < 3 ? ResultClass::PlanSuccess : ResultClass::PlanInvalidity;
    r.prompt_tokens = i < 2 ? 1000 : 2000;
    r.action_count = 10;
    r.mean_subspace = 4.0;
    records.push_back(r);
  }
  Report report = aggregate(records);
  CHECK(report.total.success_rate == doctest::Approx(75.0));
  CHECK(report.total.mean_prompt_tokens == doctest::Approx(1500.0));
  CHECK(report.total.histogram[ResultClass::PlanSuccess] == 3);
  CHECK(report.total.histogram[ResultClass::PlanInvalidity] == 1);
  CHECK(report.per_domain.at("blocks").instances == 4);

  // single record: the report echoes it
  Report single = aggregate({records[0]});
  CHECK(single.total.instances == 1);
  CHECK(single.total.success_rate == doctest::Approx(100.0));
  CHECK(single.total.mean_prompt_tokens == doctest::Approx(1000.0));
  CHECK(single.total.mean_action_count == doctest::Approx(10.0));

  CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("histogram partitions the records") {
  std::vector<RunRecord> records;
  for (int i = 0; i < 7; ++i) {
    RunRecord r;
    r.domain = i % 2 == 0 ? "blocks" : "hanoi";
    r.result_class = static_cast<ResultClass>(i % 5);
    records.push_back(r);
  }
  Report report = aggregate(records);
  int total = 0;
  for (const auto& [cls, n] : report.total.histogram) total += n;
  CHECK(total == 7);
}

TEST_CASE("baseline planner matches the oracle and flags dead ends") {
  Domain domain = parse_domain(plahx::testing::blocks_domain_text());
  Problem problem =
      parse_problem(plahx::testing::two_block_problem_text(), domain);
  GroundedTask task = ground(domain, problem);
  BaselineResult base = baseline_plan(task, 1000000);
  REQUIRE(base.found);
  CHECK(base.plan.size() == 2);

  // empty plan when init already satisfies the goal
  Problem trivial = parse_problem(R"((define (problem p) (:domain blocks)
    (:objects b1 - block) (:init (ontable b1) (clear b1) (handempty))
    (:goal (ontable b1))))",
                                  domain);
  GroundedTask trivial_task = ground(domain, trivial);
  BaselineResult empty = baseline_plan(trivial_task, 1000000);
  REQUIRE(empty.found);
  CHECK(empty.plan.empty());

  // a goal atom with no achiever anywhere: relaxed reachability rules it out
  Problem impossible = parse_problem(R"((define (problem p) (:domain blocks)
    (:objects b1 - block) (:init (clear b1) (handempty))
    (:goal (and (ontable b1) (holding b1)))))",
                                     domain);
  GroundedTask impossible_task = ground(domain, impossible);
  BaselineResult dead = baseline_plan(impossible_task, 1000000);
  CHECK(!dead.found);
}

TEST_CASE("unreachable goals report infinite initial heuristic") {
  Domain domain = parse_domain(R"((define (domain gap)
    (:predicates (a) (b) (c))
    (:action step :parameters () :precondition (a) :effect (b))))");
  Problem problem;
  problem.name = "p";
  problem.domain_name = "gap";
  problem.init = {{"a", {}}};
  problem.goal = {{"c", {}}};  // nothing achieves c
  GroundedTask task = ground(domain, problem);
  BaselineResult dead = baseline_plan(task, 1000000);
  CHECK(!dead.found);
  CHECK(dead.h_init == kInfiniteCost);
  CHECK(dead.nodes_expanded == 0);
}

TEST_CASE("run_bench produces a partitioned, reproducible report") {
  BenchOptions options;
  options.suites = {DomainKind::Rearrangement};
  options.count = 3;
  options.seed = 5;
  options.planner.threads = 1;
  options.planner.max_iterations = 30;
  options.out_dir = fs::temp_directory_path() / "plahx-test-bench";
  fs::remove_all(options.out_dir);

  BenchResult first = run_bench(options);
  REQUIRE(first.records.size() == 3);
  int classified = 0;
  for (const auto& [cls, n] : first.report.total.histogram) classified += n;
  CHECK(classified == 3);

  // files materialized for offline reuse
  CHECK(fs::exists(options.out_dir / "rearrangement" / "domain.pddl"));
  CHECK(fs::exists(options.out_dir / "rearrangement" / "fixtures" /
                   "rearrangement-001.completion.txt"));
  CHECK(fs::exists(options.out_dir / "rearrangement" / "problems" /
                   "rearrangement-001.pddl"));

  BenchResult second = run_bench(options);
  CHECK(report_to_json(first.report, false).dump() ==
        report_to_json(second.report, false).dump());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    CHECK(first.records[i].instance_id == second.records[i].instance_id);
    CHECK(first.records[i].plan_length == second.records[i].plan_length);
    CHECK(record_to_json(first.records[i], false).dump() ==
          record_to_json(second.records[i], false).dump());
  }

  // timing appears only when requested
  std::string with_timing = report_to_json(first.report, true).dump();
  std::string without = report_to_json(first.report, false).dump();
  CHECK(with_timing.find("cpu_seconds") != std::string::npos);
  CHECK(without.find("cpu_seconds") == std::string::npos);
  CHECK(report_to_text(first.report, false).find("total") != std::string::npos);
}

TEST_CASE("baseline bench mode reports full-space searches") {
  BenchOptions options;
  options.suites = {DomainKind::Rearrangement};
  options.count = 2;
  options.seed = 6;
  options.baseline = true;
  options.out_dir = fs::temp_directory_path() / "plahx-test-bench-base";
  fs::remove_all(options.out_dir);
  BenchResult result = run_bench(options);
  for (const RunRecord& r : result.records) {
    CHECK(r.result_class == ResultClass::PlanSuccess);
    CHECK(r.pscr == doctest::Approx(1.0));
    CHECK(r.mean_subspace == doctest::Approx(r.action_count));
  }
}
