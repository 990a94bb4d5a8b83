#include "plahx/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <queue>
#include <sstream>

namespace plahx {

namespace {

constexpr long kBaselineBudget = 1000000;

const char* kBlocksDomain = R"((define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block)
               (ontable ?x - block)
               (clear ?x - block)
               (handempty)
               (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x)
                 (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (ontable ?x) (clear ?x) (handempty)
                 (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty)
                 (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y)
                 (not (on ?x ?y)) (not (clear ?x)) (not (handempty))))
))";

const char* kHanoiDomain = R"((define (domain hanoi)
  (:requirements :strips)
  (:predicates (clear ?x) (on ?x ?y) (smaller ?x ?y))
  (:action move
    :parameters (?disc ?from ?to)
    :precondition (and (smaller ?to ?disc) (on ?disc ?from)
                       (clear ?disc) (clear ?to))
    :effect (and (clear ?from) (on ?disc ?to)
                 (not (on ?disc ?from)) (not (clear ?to))))
))";

const char* kGrippersDomain = R"((define (domain grippers)
  (:requirements :strips :typing)
  (:types room gripper item - object key box - item)
  (:predicates (at-robby ?r - room)
               (at ?o - item ?r - room)
               (free ?g - gripper)
               (carry ?o - item ?g - gripper)
               (connected ?a - room ?b - room)
               (locked ?a - room ?b - room)
               (unlocked ?a - room ?b - room))
  (:action move
    :parameters (?from ?to - room)
    :precondition (and (at-robby ?from) (connected ?from ?to)
                       (unlocked ?from ?to))
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action pick
    :parameters (?o - item ?r - room ?g - gripper)
    :precondition (and (at ?o ?r) (at-robby ?r) (free ?g))
    :effect (and (carry ?o ?g) (not (at ?o ?r)) (not (free ?g))))
  (:action drop
    :parameters (?o - item ?r - room ?g - gripper)
    :precondition (and (carry ?o ?g) (at-robby ?r))
    :effect (and (at ?o ?r) (free ?g) (not (carry ?o ?g))))
  (:action unlock
    :parameters (?a ?b - room ?k - key ?g - gripper)
    :precondition (and (at-robby ?a) (connected ?a ?b) (locked ?a ?b)
                       (carry ?k ?g))
    :effect (and (unlocked ?a ?b) (unlocked ?b ?a)
                 (not (locked ?a ?b)) (not (locked ?b ?a))))
))";

const char* kRearrangementDomain = R"((define (domain rearrangement)
  (:requirements :strips :typing)
  (:types block bowl)
  (:predicates (on-table ?b - block)
               (holding ?b - block)
               (hand-empty)
               (in ?b - block ?w - bowl)
               (free ?w - bowl))
  (:action pick
    :parameters (?b - block)
    :precondition (and (on-table ?b) (hand-empty))
    :effect (and (holding ?b) (not (on-table ?b)) (not (hand-empty))))
  (:action place
    :parameters (?b - block ?w - bowl)
    :precondition (and (holding ?b) (free ?w))
    :effect (and (in ?b ?w) (hand-empty)
                 (not (holding ?b)) (not (free ?w))))
))";

const char* kColors[] = {"rose", "blue", "green",  "yellow", "orange",
                         "purple", "red", "gray", "white",  "brown"};
constexpr int kColorCount = 10;

struct SuiteParams {
  const char* text;
  SizeRange default_size;
  int min_plan, max_plan;
};

const SuiteParams& suite_params(DomainKind kind) {
  static const SuiteParams params[] = {
      {kBlocksDomain, {3, 5}, 2, 12},
      {kHanoiDomain, {1, 3}, 1, 3},
      {kGrippersDomain, {2, 4}, 4, 8},
      {kRearrangementDomain, {3, 6}, 2, 4},
  };
  return params[static_cast<int>(kind)];
}

const Domain& parsed_domain(DomainKind kind) {
  static const Domain domains[] = {
      parse_domain(kBlocksDomain),
      parse_domain(kHanoiDomain),
      parse_domain(kGrippersDomain),
      parse_domain(kRearrangementDomain),
  };
  return domains[static_cast<int>(kind)];
}

struct Proposal {
  std::string instruction;
  Abstraction abstraction;
};

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += i + 1 == names.size() ? " and " : ", ";
    out += names[i];
  }
  return out;
}

Proposal propose_blocks(Rng& rng, SizeRange size) {
  int n = rng.range(size.lo, size.hi);
  Proposal p;
  std::vector<std::string> blocks;
  std::vector<std::string> color(n);
  for (int i = 0; i < n; ++i) {
    blocks.push_back("b" + std::to_string(i + 1));
    color[i] = kColors[rng.index(kColorCount)];
  }

  // random initial stacking
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::vector<int>> stacks;
  for (int b : order) {
    if (stacks.empty() || rng.uniform01() < 0.4)
      stacks.push_back({b});
    else
      stacks.back().push_back(b);
  }

  for (int i = 0; i < n; ++i)
    p.abstraction.objects.push_back({blocks[i], "block"});
  p.abstraction.init.push_back({"handempty", {}});
  std::string placement;
  for (const std::vector<int>& stack : stacks) {
    p.abstraction.init.push_back({"ontable", {blocks[stack.front()]}});
    placement += "Block " + blocks[stack.front()] + " is on the table. ";
    for (std::size_t i = 1; i < stack.size(); ++i) {
      p.abstraction.init.push_back({"on", {blocks[stack[i]], blocks[stack[i - 1]]}});
      placement += "Block " + blocks[stack[i]] + " is on block " +
                   blocks[stack[i - 1]] + ". ";
    }
    p.abstraction.init.push_back({"clear", {blocks[stack.back()]}});
  }

  // goal tower, top listed first
  int height = rng.range(2, std::min(4, n));
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  rng.shuffle(pick);
  pick.resize(height);
  std::string goal_sentence;
  if (height == 2 && color[pick[0]] == color[pick[1]]) {
    goal_sentence = "Stack 2 " + color[pick[0]] + " blocks.";
  } else {
    goal_sentence = "Stack";
    for (int i = 0; i + 1 < height; ++i) {
      if (i > 0) goal_sentence += " and";
      goal_sentence += " block " + blocks[pick[i]] + " on block " +
                       blocks[pick[i + 1]];
    }
    goal_sentence += ".";
  }
  for (int i = 0; i + 1 < height; ++i)
    p.abstraction.goal.push_back({"on", {blocks[pick[i]], blocks[pick[i + 1]]}});

  std::vector<std::string> described;
  for (int i = 0; i < n; ++i) described.push_back(color[i] + " block " + blocks[i]);
  p.instruction = goal_sentence + " I have " + std::to_string(n) + " blocks: " +
                  join_names(described) + ". " + placement;
  return p;
}

Proposal propose_hanoi(Rng& rng, SizeRange size) {
  int discs = rng.range(size.lo, size.hi);
  Proposal p;
  std::vector<std::string> disc_names, rod_names{"rod1", "rod2", "rod3"};
  std::vector<std::string> color(discs);
  for (int i = 0; i < discs; ++i) {
    disc_names.push_back("d" + std::to_string(i + 1));
    color[i] = kColors[(i + 7) % kColorCount];  // stable per-size colors
    p.abstraction.objects.push_back({disc_names[i], "object"});
  }
  for (const std::string& rod : rod_names)
    p.abstraction.objects.push_back({rod, "object"});

  // disc i fits on any rod and on any larger disc j > i
  for (int i = 0; i < discs; ++i) {
    for (const std::string& rod : rod_names)
      p.abstraction.init.push_back({"smaller", {rod, disc_names[i]}});
    for (int j = i + 1; j < discs; ++j)
      p.abstraction.init.push_back({"smaller", {disc_names[j], disc_names[i]}});
  }

  // legal random placement: per rod, discs stacked largest at the bottom
  std::vector<std::vector<int>> rods(3);
  for (int i = discs - 1; i >= 0; --i) rods[rng.index(3)].push_back(i);
  std::string observation;
  for (int r = 0; r < 3; ++r) {
    std::string below = rod_names[r];
    if (rods[r].empty()) {
      p.abstraction.init.push_back({"clear", {rod_names[r]}});
      continue;
    }
    for (int disc : rods[r]) {
      p.abstraction.init.push_back({"on", {disc_names[disc], below}});
      observation += color[disc] + " disk " +
                     (below == rod_names[r]
                          ? "in rod " + std::to_string(r + 1)
                          : "on top of " + color[std::stoi(below.substr(1)) - 1] +
                                " disk") +
                     ". ";
      below = disc_names[disc];
    }
    p.abstraction.init.push_back({"clear", {below}});
  }

  int target_disc = static_cast<int>(rng.index(discs));
  int target_rod = static_cast<int>(rng.index(3));
  p.abstraction.goal.push_back(
      {"on", {disc_names[target_disc], rod_names[target_rod]}});

  if (!observation.empty()) {
    observation[0] = static_cast<char>(
        std::toupper(static_cast<unsigned char>(observation[0])));
  }
  p.instruction = "Move the " + color[target_disc] + " disk in rod " +
                  std::to_string(target_rod + 1) + ". " + observation +
                  "The disks can be moved in rod 1, rod 2, rod 3.";
  return p;
}

Proposal propose_grippers(Rng& rng, SizeRange size) {
  int rooms = rng.range(size.lo, size.hi);
  Proposal p;
  std::vector<std::string> room_names;
  for (int r = 0; r < rooms; ++r)
    room_names.push_back("room" + std::to_string(r + 1));
  std::string key_color = kColors[rng.index(kColorCount)];
  std::string box_color = kColors[rng.index(kColorCount)];
  int box_room = rooms == 1 ? 0 : 1 + static_cast<int>(rng.index(rooms - 1));

  for (const std::string& room : room_names)
    p.abstraction.objects.push_back({room, "room"});
  p.abstraction.objects.push_back({"gleft", "gripper"});
  p.abstraction.objects.push_back({"gright", "gripper"});
  p.abstraction.objects.push_back({"key1", "key"});
  p.abstraction.objects.push_back({"box1", "box"});

  p.abstraction.init.push_back({"at-robby", {"room1"}});
  p.abstraction.init.push_back({"free", {"gleft"}});
  p.abstraction.init.push_back({"free", {"gright"}});
  p.abstraction.init.push_back({"at", {"key1", "room1"}});
  p.abstraction.init.push_back({"at", {"box1", room_names[box_room]}});

  std::string doors;
  for (int r = 0; r + 1 < rooms; ++r) {
    const std::string& a = room_names[r];
    const std::string& b = room_names[r + 1];
    p.abstraction.init.push_back({"connected", {a, b}});
    p.abstraction.init.push_back({"connected", {b, a}});
    bool locked = r == 0 || rng.uniform01() < 0.75;
    const char* pred = locked ? "locked" : "unlocked";
    p.abstraction.init.push_back({pred, {a, b}});
    p.abstraction.init.push_back({pred, {b, a}});
    doors += "The door connecting Room " + std::to_string(r + 1) +
             " and Room " + std::to_string(r + 2) +
             (locked ? " is locked. " : " is open. ");
  }

  p.abstraction.goal.push_back({"carry", {"box1", "gleft"}});

  p.instruction = "Pick up the " + box_color + " box. Room 1 has " + key_color +
                  " key, agent. Room " + std::to_string(box_room + 1) + " has " +
                  box_color + " box. " + doors;
  return p;
}

Proposal propose_rearrangement(Rng& rng, SizeRange size) {
  int blocks = rng.range(size.lo, size.hi);
  int bowls = rng.range(2, std::min(4, blocks));
  int pairs = rng.range(1, std::min(2, bowls));
  std::string block_color = kColors[rng.index(kColorCount)];
  std::string bowl_color = kColors[rng.index(kColorCount)];

  Proposal p;
  std::vector<std::string> block_names, bowl_names;
  for (int i = 0; i < blocks; ++i)
    block_names.push_back("block" + std::to_string(i + 1));
  for (int i = 0; i < bowls; ++i)
    bowl_names.push_back("bowl" + std::to_string(i + 1));
  for (const std::string& b : block_names)
    p.abstraction.objects.push_back({b, "block"});
  for (const std::string& w : bowl_names)
    p.abstraction.objects.push_back({w, "bowl"});

  p.abstraction.init.push_back({"hand-empty", {}});
  for (const std::string& b : block_names)
    p.abstraction.init.push_back({"on-table", {b}});
  for (const std::string& w : bowl_names)
    p.abstraction.init.push_back({"free", {w}});

  std::vector<int> block_pick(blocks), bowl_pick(bowls);
  for (int i = 0; i < blocks; ++i) block_pick[i] = i;
  for (int i = 0; i < bowls; ++i) bowl_pick[i] = i;
  rng.shuffle(block_pick);
  rng.shuffle(bowl_pick);
  for (int i = 0; i < pairs; ++i)
    p.abstraction.goal.push_back(
        {"in", {block_names[block_pick[i]], bowl_names[bowl_pick[i]]}});

  std::vector<std::string> listing;
  for (int i = 0; i < bowls; ++i)
    listing.push_back(bowl_color + " " + bowl_names[i]);
  for (int i = 0; i < blocks; ++i)
    listing.push_back(block_color + " " + block_names[i]);
  p.instruction = std::string("Put the ") + block_color +
                  (pairs > 1 ? " blocks" : " block") + " in " + bowl_color +
                  (pairs > 1 ? " bowls." : " bowl.") + " There is a " +
                  join_names(listing) + ".";
  return p;
}

Proposal propose(DomainKind kind, Rng& rng, SizeRange size) {
  switch (kind) {
    case DomainKind::Blocks: return propose_blocks(rng, size);
    case DomainKind::Hanoi: return propose_hanoi(rng, size);
    case DomainKind::Grippers: return propose_grippers(rng, size);
    case DomainKind::Rearrangement: return propose_rearrangement(rng, size);
  }
  throw GenerationFailure("unknown domain kind");
}

}  // namespace

std::string_view domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::Blocks: return "blocks";
    case DomainKind::Hanoi: return "hanoi";
    case DomainKind::Grippers: return "grippers";
    case DomainKind::Rearrangement: return "rearrangement";
  }
  return "?";
}

std::optional<DomainKind> domain_kind_from(std::string_view name) {
  for (DomainKind kind : {DomainKind::Blocks, DomainKind::Hanoi,
                          DomainKind::Grippers, DomainKind::Rearrangement})
    if (domain_kind_name(kind) == name) return kind;
  return std::nullopt;
}

std::string_view domain_text(DomainKind kind) { return suite_params(kind).text; }

std::vector<TaskInstance> generate_instances(DomainKind kind, int count,
                                             SizeRange size,
                                             std::uint64_t seed) {
  const SuiteParams& params = suite_params(kind);
  if (size.lo <= 0 || size.hi < size.lo) size = params.default_size;
  const Domain& domain = parsed_domain(kind);

  Rng rng(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(kind));
  std::vector<TaskInstance> out;
  long attempts = 0;
  const long attempt_cap = 500L * count + 100;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > attempt_cap)
      throw GenerationFailure(
          std::string("could not certify enough solvable ") +
          std::string(domain_kind_name(kind)) + " instances within " +
          std::to_string(attempt_cap) + " attempts");
    Proposal proposal = propose(kind, rng, size);
    std::string id = std::string(domain_kind_name(kind)) + "-" +
                     (out.size() + 1 < 10 ? "00" : out.size() + 1 < 100 ? "0" : "") +
                     std::to_string(out.size() + 1);
    Problem problem;
    try {
      problem = embed_into_problem(proposal.abstraction, domain, id);
    } catch (const ParseError&) {
      continue;  // degenerate draw
    }
    GroundedTask task = ground(domain, problem);
    OracleResult oracle = bfs_oracle(task);
    if (!oracle.solvable || oracle.length < params.min_plan ||
        oracle.length > params.max_plan)
      continue;
    TaskInstance instance;
    instance.id = id;
    instance.instruction = proposal.instruction;
    instance.problem_text = serialize(problem);
    instance.abstraction_text = abstraction_to_text(proposal.abstraction);
    instance.optimal_length = oracle.length;
    out.push_back(std::move(instance));
  }
  return out;
}

std::vector<TaskInstance> make_shot_instances(DomainKind kind, int count,
                                              std::uint64_t seed) {
  return generate_instances(kind, count, {}, seed ^ 0x53484f5453ull);
}

std::vector<Shot> make_shots(DomainKind kind, int count, std::uint64_t seed) {
  std::vector<Shot> shots;
  for (TaskInstance& inst : make_shot_instances(kind, count, seed))
    shots.push_back({std::move(inst.instruction), std::move(inst.abstraction_text)});
  return shots;
}

OracleResult bfs_oracle(const GroundedTask& task, long state_cap) {
  OracleResult result;
  if (task.init.is_superset_of(task.goal)) {
    result.solvable = true;
    result.length = 0;
    result.states = 1;
    return result;
  }
  std::unordered_map<AtomSet, int, AtomSetHash> dist;
  std::queue<AtomSet> frontier;
  dist.emplace(task.init, 0);
  frontier.push(task.init);
  while (!frontier.empty()) {
    AtomSet state = std::move(frontier.front());
    frontier.pop();
    int d = dist.at(state);
    for (const GroundedAction& action : task.actions) {
      if (!applicable(state, action)) continue;
      AtomSet next = state;
      next.subtract(action.del);
      next.unite(action.add);
      if (dist.count(next)) continue;
      if (next.is_superset_of(task.goal)) {
        result.solvable = true;
        result.length = d + 1;
        result.states = static_cast<long>(dist.size()) + 1;
        return result;
      }
      dist.emplace(next, d + 1);
      frontier.push(next);
      if (static_cast<long>(dist.size()) > state_cap) {
        result.capped = true;
        result.states = static_cast<long>(dist.size());
        return result;
      }
    }
  }
  result.states = static_cast<long>(dist.size());
  return result;
}

long reachable_state_count(const GroundedTask& task, long state_cap) {
  std::unordered_map<AtomSet, char, AtomSetHash> seen;
  std::queue<AtomSet> frontier;
  seen.emplace(task.init, 1);
  frontier.push(task.init);
  while (!frontier.empty()) {
    AtomSet state = std::move(frontier.front());
    frontier.pop();
    for (const GroundedAction& action : task.actions) {
      if (!applicable(state, action)) continue;
      AtomSet next = state;
      next.subtract(action.del);
      next.unite(action.add);
      if (seen.emplace(next, 1).second) {
        frontier.push(next);
        if (static_cast<long>(seen.size()) > state_cap)
          return static_cast<long>(seen.size());
      }
    }
  }
  return static_cast<long>(seen.size());
}

std::string_view result_class_name(ResultClass c) {
  switch (c) {
    case ResultClass::SyntaxError: return "syntax-error";
    case ResultClass::SemanticError: return "semantic-error";
    case ResultClass::PlanInvalidity: return "plan-invalidity";
    case ResultClass::PlanSuccess: return "plan-success";
    case ResultClass::ContextOverflow: return "context-overflow";
    case ResultClass::DomainDrift: return "domain-drift";
  }
  return "?";
}

ResultClass classify_result(const PipelineTrace& trace) {
  switch (trace.translation) {
    case TranslationOutcome::Kind::ContextOverflow:
      return ResultClass::ContextOverflow;
    case TranslationOutcome::Kind::SyntaxError:
      return ResultClass::SyntaxError;
    case TranslationOutcome::Kind::SemanticError:
      return ResultClass::SemanticError;
    case TranslationOutcome::Kind::Success:
      break;
  }
  if (trace.drift_flagged) return ResultClass::DomainDrift;
  if (trace.plan_found && trace.plan_revalidates) return ResultClass::PlanSuccess;
  return ResultClass::PlanInvalidity;
}

double compute_pscr(double action_count, double population,
                    double max_subspace_size) {
  return action_count / (population * max_subspace_size);
}

Report aggregate(const std::vector<RunRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("aggregate: no records");

  auto finish = [](DomainStats& stats, const std::vector<const RunRecord*>& rs) {
    stats.instances = static_cast<int>(rs.size());
    int successes = 0;
    long planner_runs = 0;
    double tokens = 0, actions = 0, subspace = 0, cpu = 0;
    for (const RunRecord* r : rs) {
      stats.histogram[r->result_class] += 1;
      if (r->result_class == ResultClass::PlanSuccess) ++successes;
      tokens += static_cast<double>(r->prompt_tokens);
      if (r->action_count > 0) {  // planner stage ran
        ++planner_runs;
        actions += r->action_count;
        subspace += r->mean_subspace;
        cpu += r->cpu_seconds;
      }
    }
    stats.success_rate = 100.0 * successes / static_cast<double>(rs.size());
    stats.mean_prompt_tokens = tokens / static_cast<double>(rs.size());
    if (planner_runs > 0) {
      stats.mean_action_count = actions / static_cast<double>(planner_runs);
      stats.mean_subspace = subspace / static_cast<double>(planner_runs);
      stats.mean_cpu_seconds = cpu / static_cast<double>(planner_runs);
    }
  };

  Report report;
  std::map<std::string, std::vector<const RunRecord*>> by_domain;
  std::vector<const RunRecord*> all;
  for (const RunRecord& r : records) {
    by_domain[r.domain].push_back(&r);
    all.push_back(&r);
  }
  for (const auto& [domain, rs] : by_domain)
    finish(report.per_domain[domain], rs);
  finish(report.total, all);
  return report;
}

nlohmann::ordered_json record_to_json(const RunRecord& record,
                                      bool include_timing) {
  nlohmann::ordered_json j;
  j["instance"] = record.instance_id;
  j["domain"] = record.domain;
  j["class"] = std::string(result_class_name(record.result_class));
  j["prompt_tokens"] = record.prompt_tokens;
  if (include_timing) j["cpu_seconds"] = record.cpu_seconds;
  j["plan_length"] = record.plan_length;
  j["actions"] = record.action_count;
  j["mean_subspace"] = record.mean_subspace;
  j["pscr"] = record.pscr;
  return j;
}

namespace {

nlohmann::ordered_json stats_to_json(const DomainStats& stats,
                                     bool include_timing) {
  nlohmann::ordered_json j;
  j["instances"] = stats.instances;
  j["success_rate"] = stats.success_rate;
  j["mean_prompt_tokens"] = stats.mean_prompt_tokens;
  j["mean_actions"] = stats.mean_action_count;
  j["mean_subspace"] = stats.mean_subspace;
  if (include_timing) j["mean_cpu_seconds"] = stats.mean_cpu_seconds;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& [cls, n] : stats.histogram)
    classes[std::string(result_class_name(cls))] = n;
  j["classes"] = std::move(classes);
  return j;
}

}  // namespace

nlohmann::ordered_json report_to_json(const Report& report,
                                      bool include_timing) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json domains = nlohmann::ordered_json::object();
  for (const auto& [name, stats] : report.per_domain)
    domains[name] = stats_to_json(stats, include_timing);
  j["per_domain"] = std::move(domains);
  j["total"] = stats_to_json(report.total, include_timing);
  j["total_weighting"] = "instance-count";
  return j;
}

std::string report_to_text(const Report& report, bool include_timing) {
  std::ostringstream os;
  auto line = [&](const std::string& name, const DomainStats& s) {
    os << name;
    os << std::string(name.size() < 16 ? 16 - name.size() : 1, ' ');
    char buf[160];
    if (include_timing)
      std::snprintf(buf, sizeof buf, "%4d %9.2f %10.1f %8.1f %8.2f %8.3f",
                    s.instances, s.success_rate, s.mean_prompt_tokens,
                    s.mean_action_count, s.mean_subspace, s.mean_cpu_seconds);
    else
      std::snprintf(buf, sizeof buf, "%4d %9.2f %10.1f %8.1f %8.2f",
                    s.instances, s.success_rate, s.mean_prompt_tokens,
                    s.mean_action_count, s.mean_subspace);
    os << buf << '\n';
  };
  os << "domain             n  success%     tokens      |A|   |A^(i)|";
  if (include_timing) os << "   cpu(s)";
  os << '\n';
  for (const auto& [name, stats] : report.per_domain) line(name, stats);
  line("total", report.total);
  os << "classes:";
  for (const auto& [cls, n] : report.total.histogram)
    os << ' ' << result_class_name(cls) << '=' << n;
  os << '\n';
  return os.str();
}

BaselineResult baseline_plan(const GroundedTask& task, long budget) {
  std::vector<int> all(task.actions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  LocalResult local = astar_subspace(task, all, kInfiniteCost, budget);
  BaselineResult result;
  result.h_init = local.h_init;
  result.nodes_expanded = local.nodes_expanded;
  for (const std::vector<int>& plan : local.plans) {
    if (!result.found || static_cast<Cost>(plan.size()) <
        static_cast<Cost>(result.plan.size())) {
      result.found = true;
      result.plan = plan;
    }
  }
  return result;
}

BenchResult run_bench(const BenchOptions& options, std::ostream* progress,
                      const GenerationObserver& observer) {
  namespace fs = std::filesystem;
  BenchResult bench;
  bench.out_dir = options.out_dir;
  if (bench.out_dir.empty())
    bench.out_dir = fs::temp_directory_path() /
                    ("plahx-bench-" + std::to_string(options.seed));
  fs::create_directories(bench.out_dir);

  std::uint64_t instance_counter = 0;
  for (DomainKind kind : options.suites) {
    const Domain& domain = parsed_domain(kind);
    const std::string kind_name(domain_kind_name(kind));
    fs::path suite_dir = bench.out_dir / kind_name;
    fs::path fixture_dir = suite_dir / "fixtures";
    fs::path problem_dir = suite_dir / "problems";
    fs::create_directories(fixture_dir);
    fs::create_directories(problem_dir);

    fs::path domain_path = suite_dir / "domain.pddl";
    std::ofstream(domain_path) << domain_text(kind);

    std::vector<TaskInstance> instances =
        generate_instances(kind, options.count, {}, options.seed);
    TranslatorConfig tcfg;
    tcfg.context_limit = options.context_limit;
    tcfg.shot_count = options.shot_count;
    tcfg.shots = make_shots(kind, options.shot_count, options.seed);

    for (TaskInstance& instance : instances) {
      instance.domain_path = domain_path.string();
      fs::path problem_path = problem_dir / (instance.id + ".pddl");
      std::ofstream(problem_path) << instance.problem_text;
      instance.problem_path = problem_path.string();
      std::ofstream(fixture_dir / (instance.id + ".completion.txt"))
          << instance.abstraction_text;

      RunRecord record;
      record.instance_id = instance.id;
      record.domain = kind_name;
      PipelineTrace trace;

      MockClient client(fixture_dir, instance.id);
      TranslationOutcome outcome =
          translate(instance.instruction, domain, tcfg, client);
      trace.translation = outcome.kind;
      record.prompt_tokens = outcome.tokens.prompt_tokens;

      if (outcome.kind == TranslationOutcome::Kind::Success) {
        Problem problem =
            embed_into_problem(outcome.abstraction, domain, instance.id);
        GroundedTask task = ground(domain, problem);
        record.action_count = static_cast<int>(task.actions.size());

        auto t0 = std::chrono::steady_clock::now();
        if (options.baseline) {
          BaselineResult base = baseline_plan(task, kBaselineBudget);
          trace.plan_found = base.found;
          if (base.found) {
            trace.plan_revalidates =
                validate_plan(task, base.plan).kind ==
                ValidationOutcome::Kind::Success;
            record.plan_length = static_cast<int>(base.plan.size());
          }
          record.mean_subspace = static_cast<double>(record.action_count);
          record.pscr = record.action_count > 0 ? 1.0 : 0.0;
        } else {
          SearchConfig cfg = options.planner;
          cfg.seed = options.seed * 0x9e3779b97f4a7c15ull + ++instance_counter;
          PlanResult result = run(task, cfg, nullptr, observer);
          trace.plan_found = result.found;
          if (result.found) {
            trace.plan_revalidates =
                validate_plan(task, result.best_plan).kind ==
                ValidationOutcome::Kind::Success;
            record.plan_length = static_cast<int>(result.best_plan.size());
          }
          record.mean_subspace = result.metrics.mean_subspace_size;
          record.pscr =
              result.metrics.max_subspace_size > 0
                  ? compute_pscr(record.action_count, cfg.population,
                                 result.metrics.max_subspace_size)
                  : 0.0;
        }
        record.cpu_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      }

      record.result_class = classify_result(trace);
      if (progress != nullptr)
        *progress << '[' << record.instance_id << "] "
                  << result_class_name(record.result_class)
                  << " len=" << record.plan_length
                  << " oracle=" << instance.optimal_length << '\n';
      bench.records.push_back(std::move(record));
    }
  }

  bench.report = aggregate(bench.records);
  return bench;
}

}  // namespace plahx
