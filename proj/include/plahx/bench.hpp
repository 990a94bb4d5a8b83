#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plahx/meta_search.hpp"
#include "plahx/translator.hpp"

namespace plahx {

enum class DomainKind { Blocks, Hanoi, Grippers, Rearrangement };

std::string_view domain_kind_name(DomainKind kind);
std::optional<DomainKind> domain_kind_from(std::string_view name);
std::string_view domain_text(DomainKind kind);

struct GenerationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Object-count range for the generator; {0, 0} selects per-domain defaults.
struct SizeRange {
  int lo = 0;
  int hi = 0;
};

struct TaskInstance {
  std::string id;
  std::string instruction;
  std::string problem_text;      // gold problem file
  std::string abstraction_text;  // gold abstraction (mock fixture payload)
  int optimal_length = -1;       // BFS-oracle plan length
  std::string domain_path;       // set once materialized
  std::string problem_path;
};

// Solvable instances only: every emitted instance is certified by the BFS
// oracle and its optimal length falls inside the per-domain window
// (blocks 2-12, hanoi 1-3, grippers 4-8, rearrangement 2-4).
std::vector<TaskInstance> generate_instances(DomainKind kind, int count,
                                             SizeRange size = {},
                                             std::uint64_t seed = 1);

// Few-shot demonstration pairs drawn from a seed-derived instance stream.
std::vector<TaskInstance> make_shot_instances(DomainKind kind, int count,
                                              std::uint64_t seed);
std::vector<Shot> make_shots(DomainKind kind, int count, std::uint64_t seed);

// Breadth-first search over the full grounded transition graph, independent
// of the planner under test. Capped by explored-state count.
struct OracleResult {
  bool solvable = false;
  int length = -1;
  bool capped = false;
  long states = 0;
};
OracleResult bfs_oracle(const GroundedTask& task, long state_cap = 1000000);

// Number of distinct reachable states, capped.
long reachable_state_count(const GroundedTask& task, long state_cap);

enum class ResultClass {
  SyntaxError,
  SemanticError,
  PlanInvalidity,
  PlanSuccess,
  ContextOverflow,
  DomainDrift,
};
std::string_view result_class_name(ResultClass c);

struct PipelineTrace {
  TranslationOutcome::Kind translation = TranslationOutcome::Kind::Success;
  bool drift_flagged = false;
  bool plan_found = false;
  bool plan_revalidates = false;
};
ResultClass classify_result(const PipelineTrace& trace);

// PSCR = |A| / (N_pop · max subspace size)
double compute_pscr(double action_count, double population,
                    double max_subspace_size);

struct RunRecord {
  std::string instance_id;
  std::string domain;
  ResultClass result_class = ResultClass::PlanInvalidity;
  long prompt_tokens = 0;
  double cpu_seconds = 0.0;  // planning stage wall clock
  int plan_length = -1;
  int action_count = 0;        // |A|
  double mean_subspace = 0.0;  // mean |A^(i)| over the run
  double pscr = 0.0;
};

struct DomainStats {
  int instances = 0;
  double success_rate = 0.0;  // percent
  double mean_prompt_tokens = 0.0;
  double mean_action_count = 0.0;
  double mean_subspace = 0.0;
  double mean_cpu_seconds = 0.0;
  std::map<ResultClass, int> histogram;
};

struct Report {
  std::map<std::string, DomainStats> per_domain;
  DomainStats total;  // instance-weighted
};

Report aggregate(const std::vector<RunRecord>& records);

// Timing is omitted from serialized reports when include_timing is false so
// equal-seed runs diff byte-identically.
nlohmann::ordered_json record_to_json(const RunRecord& record,
                                      bool include_timing);
nlohmann::ordered_json report_to_json(const Report& report,
                                      bool include_timing);
std::string report_to_text(const Report& report, bool include_timing);

// Full-space A* with an open bound: optimal plan length when the search
// exhausts within budget.
struct BaselineResult {
  bool found = false;
  std::vector<int> plan;
  Cost h_init = kInfiniteCost;
  long nodes_expanded = 0;
};
BaselineResult baseline_plan(const GroundedTask& task, long budget);

struct BenchOptions {
  std::vector<DomainKind> suites;
  int count = 10;
  std::uint64_t seed = 1;
  bool baseline = false;  // full-space A* instead of the population search
  SearchConfig planner;
  long context_limit = 5000;
  int shot_count = 6;
  std::filesystem::path out_dir;  // empty -> temp directory
};

struct BenchResult {
  Report report;
  std::vector<RunRecord> records;
  std::filesystem::path out_dir;
};

BenchResult run_bench(const BenchOptions& options,
                      std::ostream* progress = nullptr,
                      const GenerationObserver& observer = {});

}  // namespace plahx
