#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plahx/bench.hpp"

using namespace plahx;
namespace fs = std::filesystem;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitNoPlan = 1;
constexpr int kExitTranslation = 2;
constexpr int kExitUsage = 3;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

struct PlannerFlags {
  SearchConfig config;
  bool single_thread = false;
  std::string log_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "Search seed");
    cmd->add_option("--pop-size", config.population, "Population size")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", config.max_iterations, "Iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--archive-threshold", config.archive_threshold,
                    "Archived plans that stop the search early")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--budget", config.budget,
                    "Node expansions per individual per generation")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--single-thread", single_thread,
                  "Run local searches sequentially (canonical reports)");
    cmd->add_option("--log", log_path, "Write per-generation JSON lines here");
  }

  SearchConfig resolved() const {
    SearchConfig out = config;
    if (single_thread) out.threads = 1;
    return out;
  }
};

nlohmann::ordered_json plan_record(const GroundedTask& task,
                                   const PlanResult& result,
                                   const SearchConfig& config,
                                   double wall_seconds, bool include_timing) {
  nlohmann::ordered_json j;
  j["problem"] = task.problem_name;
  j["found"] = result.found;
  j["plan_length"] = result.found ? static_cast<int>(result.best_plan.size()) : -1;
  j["actions"] = task.actions.size();
  j["archive"] = result.archive.size();
  j["generations"] = result.metrics.generations;
  j["expansions"] = result.metrics.total_expansions;
  j["mean_subspace"] = result.metrics.mean_subspace_size;
  j["pscr"] = result.metrics.max_subspace_size > 0
                  ? compute_pscr(static_cast<double>(task.actions.size()),
                                 config.population,
                                 result.metrics.max_subspace_size)
                  : 0.0;
  j["seed"] = config.seed;
  if (include_timing) j["wall_seconds"] = wall_seconds;
  return j;
}

int run_plan(const std::string& domain_path, const std::string& problem_path,
             const PlannerFlags& flags) {
  Domain domain = parse_domain(slurp(domain_path));
  Problem problem = parse_problem(slurp(problem_path), domain);
  GroundedTask task = ground(domain, problem);

  std::unique_ptr<std::ofstream> log;
  if (!flags.log_path.empty())
    log = std::make_unique<std::ofstream>(flags.log_path);

  SearchConfig config = flags.resolved();
  auto t0 = std::chrono::steady_clock::now();
  PlanResult result = run(task, config, log.get());
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  if (result.found) std::cout << plan_to_text(task, result.best_plan);
  std::cout << plan_record(task, result, config, wall, !flags.single_thread)
                   .dump()
            << '\n';
  return result.found ? kExitSuccess : kExitNoPlan;
}

std::vector<Shot> shots_for(const Domain& domain, int count) {
  if (count <= 0) return {};
  if (std::optional<DomainKind> kind = domain_kind_from(domain.name))
    return make_shots(*kind, count, 1);
  return {};
}

struct TranslateFlags {
  std::string domain_path, instruction, endpoint, mock_dir;
  std::string instance_id = "query";
  int shots = 6;
  long context_limit = 5000;
  double temperature = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--domain", domain_path, "Domain file")->required();
    cmd->add_option("--instruction", instruction, "Task description")
        ->required();
    CLI::Option* endpoint_opt =
        cmd->add_option("--endpoint", endpoint, "Chat-completion endpoint URL");
    cmd->add_option("--mock", mock_dir,
                    "Fixture directory for the offline client")
        ->excludes(endpoint_opt);
    cmd->add_option("--shots", shots, "Few-shot demonstration count");
    cmd->add_option("--context-limit", context_limit, "Token budget");
    cmd->add_option("--id", instance_id,
                    "Instance id for fixture lookup (mock mode)");
    cmd->add_option("--temperature", temperature, "Sampling temperature");
  }

  std::unique_ptr<CompletionClient> client() const {
    if (!endpoint.empty()) return std::make_unique<HttpClient>(endpoint);
    if (!mock_dir.empty())
      return std::make_unique<MockClient>(mock_dir, instance_id);
    throw CLI::ValidationError("translate",
                               "one of --endpoint or --mock is required");
  }

  TranslatorConfig config(const Domain& domain) const {
    TranslatorConfig cfg;
    cfg.context_limit = context_limit;
    cfg.temperature = temperature;
    cfg.shot_count = shots;
    cfg.shots = shots_for(domain, shots);
    return cfg;
  }
};

int run_translate(const TranslateFlags& flags) {
  Domain domain = parse_domain(slurp(flags.domain_path));
  std::unique_ptr<CompletionClient> client = flags.client();
  TranslationOutcome outcome =
      translate(flags.instruction, domain, flags.config(domain), *client);
  if (outcome.kind == TranslationOutcome::Kind::Success) {
    std::cout << abstraction_to_text(outcome.abstraction);
    return kExitSuccess;
  }
  std::cout << to_string(outcome.kind) << ": " << outcome.detail << '\n';
  return kExitTranslation;
}

int run_solve(const TranslateFlags& tflags, const PlannerFlags& pflags) {
  Domain domain = parse_domain(slurp(tflags.domain_path));
  std::unique_ptr<CompletionClient> client = tflags.client();
  TranslationOutcome outcome =
      translate(tflags.instruction, domain, tflags.config(domain), *client);
  if (outcome.kind != TranslationOutcome::Kind::Success) {
    std::cout << to_string(outcome.kind) << ": " << outcome.detail << '\n';
    return kExitTranslation;
  }
  Problem problem =
      embed_into_problem(outcome.abstraction, domain, tflags.instance_id);
  GroundedTask task = ground(domain, problem);

  SearchConfig config = pflags.resolved();
  auto t0 = std::chrono::steady_clock::now();
  PlanResult result = run(task, config);
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (result.found) std::cout << plan_to_text(task, result.best_plan);
  nlohmann::ordered_json record =
      plan_record(task, result, config, wall, !pflags.single_thread);
  record["prompt_tokens"] = outcome.tokens.prompt_tokens;
  std::cout << record.dump() << '\n';
  return result.found ? kExitSuccess : kExitNoPlan;
}

int run_validate(const std::string& domain_path,
                 const std::string& problem_path,
                 const std::string& plan_path) {
  Domain domain = parse_domain(slurp(domain_path));
  Problem problem = parse_problem(slurp(problem_path), domain);
  GroundedTask task = ground(domain, problem);
  std::vector<int> plan = plan_from_text(task, slurp(plan_path));
  ValidationOutcome outcome = validate_plan(task, plan);
  switch (outcome.kind) {
    case ValidationOutcome::Kind::Success:
      std::cout << "success: plan of length " << plan.size()
                << " reaches the goal\n";
      return kExitSuccess;
    case ValidationOutcome::Kind::GoalUnsatisfied: {
      std::cout << "goal-unsatisfied: missing";
      for (int atom : outcome.missing_goal)
        std::cout << ' ' << task.atom_name(atom);
      std::cout << '\n';
      return kExitNoPlan;
    }
    case ValidationOutcome::Kind::PreconditionConflict:
      std::cout << "precondition-conflict: step " << outcome.step << " "
                << task.actions[plan[outcome.step]].name() << " needs "
                << task.atom_name(outcome.atom) << " deleted by step "
                << outcome.culprit << " "
                << task.actions[plan[outcome.culprit]].name() << '\n';
      return kExitNoPlan;
    case ValidationOutcome::Kind::PreconditionUnsupported:
      std::cout << "precondition-unsupported: step " << outcome.step << " "
                << task.actions[plan[outcome.step]].name() << " needs "
                << task.atom_name(outcome.atom) << '\n';
      return kExitNoPlan;
  }
  return kExitUsage;
}

struct BenchFlags {
  std::string suite = "all";
  int count = 10;
  std::uint64_t seed = 1;
  bool baseline = false;
  bool text = false;
  std::string out_dir;
  PlannerFlags planner;

  void attach(CLI::App* cmd) {
    cmd->add_option("--suite", suite,
                    "blocks|hanoi|grippers|rearrangement|all");
    cmd->add_option("--count", count, "Instances per suite")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "Generator and planner seed");
    cmd->add_flag("--baseline", baseline, "Full-space A* instead of PLAHX");
    cmd->add_flag("--text", text, "Human-readable table instead of JSON");
    cmd->add_option("--out", out_dir,
                    "Directory for domains, problems, fixtures, report");
    cmd->add_option("--pop-size", planner.config.population, "Population size");
    cmd->add_option("--max-iters", planner.config.max_iterations,
                    "Iteration cap");
    cmd->add_option("--archive-threshold", planner.config.archive_threshold,
                    "Early-stop archive size");
    cmd->add_option("--budget", planner.config.budget,
                    "Expansions per individual per generation");
    cmd->add_flag("--single-thread", planner.single_thread,
                  "Sequential local phases; canonical (timing-free) report");
  }
};

int run_bench_cmd(const BenchFlags& flags) {
  BenchOptions options;
  if (flags.suite == "all") {
    options.suites = {DomainKind::Blocks, DomainKind::Hanoi,
                      DomainKind::Grippers, DomainKind::Rearrangement};
  } else if (std::optional<DomainKind> kind = domain_kind_from(flags.suite)) {
    options.suites = {*kind};
  } else {
    std::cerr << "unknown suite '" << flags.suite << "'\n";
    return kExitUsage;
  }
  options.count = flags.count;
  options.seed = flags.seed;
  options.baseline = flags.baseline;
  options.planner = flags.planner.resolved();
  if (!flags.out_dir.empty()) options.out_dir = flags.out_dir;

  BenchResult result = run_bench(options, &std::cerr);
  bool timing = !flags.planner.single_thread;
  nlohmann::ordered_json report = report_to_json(result.report, timing);
  std::ofstream(result.out_dir / "report.json") << report.dump(2) << '\n';
  {
    std::ofstream records_out(result.out_dir / "records.jsonl");
    for (const RunRecord& record : result.records)
      records_out << record_to_json(record, timing).dump() << '\n';
  }
  if (flags.text)
    std::cout << report_to_text(result.report, timing);
  else
    std::cout << report.dump(2) << '\n';
  std::cerr << "artifacts: " << result.out_dir.string() << '\n';
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PLAHX: language-to-symbolic translation with population-based "
               "subspace planning"};
  app.require_subcommand(1);

  CLI::App* plan_cmd = app.add_subcommand("plan", "Plan a PDDL problem");
  std::string plan_domain, plan_problem;
  plan_cmd->add_option("--domain", plan_domain, "Domain file")->required();
  plan_cmd->add_option("--problem", plan_problem, "Problem file")->required();
  PlannerFlags plan_flags;
  plan_flags.attach(plan_cmd);

  CLI::App* translate_cmd = app.add_subcommand(
      "translate", "Turn an instruction into an abstraction");
  TranslateFlags translate_flags;
  translate_flags.attach(translate_cmd);

  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Translate, embed, and plan end to end");
  TranslateFlags solve_tflags;
  solve_tflags.attach(solve_cmd);
  PlannerFlags solve_pflags;
  solve_pflags.attach(solve_cmd);

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a plan against a task");
  std::string val_domain, val_problem, val_plan;
  validate_cmd->add_option("--domain", val_domain, "Domain file")->required();
  validate_cmd->add_option("--problem", val_problem, "Problem file")
      ->required();
  validate_cmd->add_option("--plan", val_plan, "Plan file, one action per line")
      ->required();

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Generate suites, run pipelines, report");
  BenchFlags bench_flags;
  bench_flags.attach(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (plan_cmd->parsed())
      return run_plan(plan_domain, plan_problem, plan_flags);
    if (translate_cmd->parsed()) return run_translate(translate_flags);
    if (solve_cmd->parsed()) return run_solve(solve_tflags, solve_pflags);
    if (validate_cmd->parsed())
      return run_validate(val_domain, val_problem, val_plan);
    if (bench_cmd->parsed()) return run_bench_cmd(bench_flags);
  } catch (const ClientError& e) {
    std::cerr << "transport error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
