#include "plahx/translator.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "plahx/heuristic.hpp"
#include "plahx/sexpr.hpp"

namespace plahx {

std::string PromptBundle::render() const {
  std::string out;
  for (const Shot& shot : shots) {
    out += "### Task\n";
    out += shot.task;
    out += "\n### Abstraction\n";
    out += shot.abstraction;
    out += "\n\n";
  }
  out += "### Task\n";
  out += query;
  out += "\n### Abstraction\n";
  return out;
}

PromptBundle build_prompt(std::vector<Shot> shots, std::string query) {
  for (const Shot& shot : shots) {
    if (shot.task.empty())
      throw std::invalid_argument("build_prompt: shot with empty task text");
    if (shot.abstraction.empty())
      throw std::invalid_argument("build_prompt: shot with empty abstraction");
  }
  if (query.empty()) throw std::invalid_argument("build_prompt: empty query");
  return PromptBundle{std::move(shots), std::move(query)};
}

long count_tokens(std::string_view text) {
  return static_cast<long>((text.size() + 3) / 4);
}

std::string_view to_string(TranslationOutcome::Kind kind) {
  switch (kind) {
    case TranslationOutcome::Kind::Success: return "success";
    case TranslationOutcome::Kind::SyntaxError: return "syntax-error";
    case TranslationOutcome::Kind::SemanticError: return "semantic-error";
    case TranslationOutcome::Kind::ContextOverflow: return "context-overflow";
  }
  return "?";
}

MockClient::MockClient(std::filesystem::path fixture_dir,
                       std::string instance_id)
    : path_(fixture_dir / (instance_id + ".completion.txt")) {}

std::string MockClient::complete(const std::string&, double, long) {
  std::ifstream in(path_, std::ios::binary);
  if (!in)
    throw ClientError("mock fixture not found: " + path_.string());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

HttpClient::HttpClient(std::string url, std::string token_env)
    : url_(std::move(url)), token_env_(std::move(token_env)) {}

std::string HttpClient::complete(const std::string& prompt, double temperature,
                                 long max_tokens) {
  // split "http://host:port/path" into base and path
  std::string base = url_;
  std::string path = "/";
  auto scheme = url_.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto slash = url_.find('/', host_start);
  if (slash != std::string::npos) {
    base = url_.substr(0, slash);
    path = url_.substr(slash);
  }

  httplib::Client client(base);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  httplib::Headers headers;
  if (const char* token = std::getenv(token_env_.c_str());
      token != nullptr && *token != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + token);

  nlohmann::json request = {{"prompt", prompt},
                            {"temperature", temperature},
                            {"max_tokens", max_tokens}};
  httplib::Result res =
      client.Post(path, headers, request.dump(), "application/json");
  if (!res)
    throw ClientError("endpoint unreachable: " + base);
  if (res->status != 200)
    throw ClientError("endpoint returned status " + std::to_string(res->status));

  // first text segment of the body
  try {
    nlohmann::json body = nlohmann::json::parse(res->body);
    if (body.contains("choices") && body["choices"].is_array() &&
        !body["choices"].empty()) {
      const nlohmann::json& first = body["choices"][0];
      if (first.contains("text") && first["text"].is_string())
        return first["text"].get<std::string>();
      if (first.contains("message") && first["message"].contains("content") &&
          first["message"]["content"].is_string())
        return first["message"]["content"].get<std::string>();
    }
    for (const char* key : {"completion", "text", "content"})
      if (body.contains(key) && body[key].is_string())
        return body[key].get<std::string>();
  } catch (const nlohmann::json::parse_error&) {
    return res->body;  // plain-text endpoint
  }
  throw ClientError("endpoint response carries no text segment");
}

namespace {

using sexpr::Node;

[[noreturn]] void abstraction_fail(const Node& node, const std::string& msg) {
  throw ParseError(ParseError::Kind::Syntax, node.line,
                   node.is_list ? "(" : node.symbol, msg);
}

Atom raw_atom(const Node& node) {
  if (!node.is_list || node.items.empty())
    abstraction_fail(node, "expected an atom");
  Atom atom;
  const Node& head = node.items.front();
  if (head.is_list || head.symbol.empty() || head.symbol[0] == ':' ||
      head.symbol == "and" || head.symbol == "not")
    abstraction_fail(head, "expected a predicate name");
  atom.pred = head.symbol;
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const Node& arg = node.items[i];
    if (arg.is_list) abstraction_fail(arg, "expected an object name");
    atom.args.push_back(arg.symbol);
  }
  return atom;
}

}  // namespace

Abstraction parse_abstraction(std::string_view text) {
  std::vector<Node> blocks = sexpr::parse_all(text);
  if (blocks.size() != 3)
    throw ParseError(ParseError::Kind::Syntax,
                     blocks.empty() ? 1 : blocks.back().line, "<abstraction>",
                     "expected exactly (:objects ...) (:init ...) (:goal ...)");
  const char* expected[3] = {":objects", ":init", ":goal"};
  for (int i = 0; i < 3; ++i) {
    const Node& block = blocks[i];
    if (!block.is_list || block.items.empty() ||
        !block.items.front().is_symbol(expected[i]))
      abstraction_fail(block, std::string("expected a (") + expected[i] +
                                  " ...) block here");
  }

  Abstraction abstraction;
  // typed-list parse, same rules as PDDL :objects
  {
    const std::vector<Node>& items = blocks[0].items;
    std::vector<std::size_t> pending;
    for (std::size_t i = 1; i < items.size(); ++i) {
      const Node& node = items[i];
      if (node.is_list) abstraction_fail(node, "expected an object name");
      if (node.symbol == "-") {
        if (pending.empty() || i + 1 >= items.size())
          abstraction_fail(node, "malformed typed object list");
        const Node& type_node = items[++i];
        if (type_node.is_list) abstraction_fail(type_node, "expected a type name");
        for (std::size_t idx : pending)
          abstraction.objects[idx].type = type_node.symbol;
        pending.clear();
        continue;
      }
      pending.push_back(abstraction.objects.size());
      abstraction.objects.push_back({node.symbol, "object"});
    }
  }
  for (std::size_t i = 1; i < blocks[1].items.size(); ++i)
    abstraction.init.push_back(raw_atom(blocks[1].items[i]));
  for (std::size_t i = 1; i < blocks[2].items.size(); ++i)
    abstraction.goal.push_back(raw_atom(blocks[2].items[i]));
  return abstraction;
}

void validate_abstraction(const Abstraction& abstraction, const Domain& domain) {
  auto semantic = [](const std::string& token, const std::string& msg) {
    throw ParseError(ParseError::Kind::Semantic, 1, token, msg);
  };

  std::vector<TypedName> known = domain.constants;
  for (const TypedName& obj : abstraction.objects) {
    if (!domain.has_type(obj.type))
      semantic(obj.type, "unknown type '" + obj.type + "'");
    for (const TypedName& seen : known)
      if (seen.name == obj.name && seen.type != obj.type)
        semantic(obj.name, "object '" + obj.name + "' declared twice");
    known.push_back(obj);
  }

  auto check_atoms = [&](const std::vector<Atom>& atoms, const char* where) {
    for (const Atom& atom : atoms) {
      const Predicate* pred = domain.find_predicate(atom.pred);
      if (pred == nullptr)
        semantic(atom.pred, std::string(where) + ": unknown predicate '" +
                                atom.pred + "'");
      if (static_cast<int>(atom.args.size()) != pred->arity())
        semantic(atom.pred, std::string(where) + ": predicate '" + atom.pred +
                                "' expects " + std::to_string(pred->arity()) +
                                " argument(s), got " +
                                std::to_string(atom.args.size()));
      for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const TypedName* object = nullptr;
        for (const TypedName& o : known)
          if (o.name == atom.args[i]) object = &o;
        if (object == nullptr)
          semantic(atom.args[i], std::string(where) + ": undeclared object '" +
                                     atom.args[i] + "'");
        if (!domain.is_subtype(object->type, pred->param_types[i]))
          semantic(atom.args[i],
                   std::string(where) + ": object '" + object->name +
                       "' of type '" + object->type +
                       "' is incompatible with '" + pred->param_types[i] + "'");
      }
    }
  };
  check_atoms(abstraction.init, "init");
  check_atoms(abstraction.goal, "goal");
  if (abstraction.goal.empty())
    semantic(":goal", "goal must contain at least one atom");
}

std::string abstraction_to_text(const Abstraction& abstraction) {
  std::string out = "(:objects " + format_typed_list(abstraction.objects) + ")\n";
  out += "(:init";
  for (const Atom& a : abstraction.init) out += ' ' + to_string(a);
  out += ")\n(:goal";
  for (const Atom& a : abstraction.goal) out += ' ' + to_string(a);
  out += ")\n";
  return out;
}

Abstraction abstraction_of(const Problem& problem) {
  return Abstraction{problem.objects, problem.init, problem.goal};
}

TranslationOutcome translate(const std::string& instruction,
                             const Domain& domain,
                             const TranslatorConfig& config,
                             CompletionClient& client) {
  std::vector<Shot> shots = config.shots;
  if (static_cast<int>(shots.size()) > config.shot_count)
    shots.resize(config.shot_count);
  PromptBundle prompt = build_prompt(std::move(shots), instruction);
  std::string rendered = prompt.render();

  const TokenCounter& counter =
      config.tokenizer ? config.tokenizer : TokenCounter(count_tokens);

  TranslationOutcome outcome;
  outcome.tokens.prompt_tokens = counter(rendered);

  std::string completion;
  for (int attempt = 0;; ++attempt) {
    try {
      completion = client.complete(rendered, config.temperature,
                                   config.context_limit);
      break;
    } catch (const ClientError&) {
      if (attempt >= 2) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
  outcome.tokens.completion_tokens = counter(completion);

  if (check_overflow(outcome.tokens.prompt_tokens,
                     outcome.tokens.completion_tokens, config.context_limit)) {
    outcome.kind = TranslationOutcome::Kind::ContextOverflow;
    outcome.detail = "prompt + completion exceed " +
                     std::to_string(config.context_limit) + " tokens";
    return outcome;
  }

  Abstraction abstraction;
  try {
    abstraction = parse_abstraction(completion);
  } catch (const ParseError& e) {
    outcome.kind = TranslationOutcome::Kind::SyntaxError;
    outcome.detail = e.what();
    return outcome;
  }
  try {
    validate_abstraction(abstraction, domain);
  } catch (const ParseError& e) {
    outcome.kind = TranslationOutcome::Kind::SemanticError;
    outcome.detail = e.what();
    return outcome;
  }
  outcome.kind = TranslationOutcome::Kind::Success;
  outcome.abstraction = std::move(abstraction);
  return outcome;
}

Problem embed_into_problem(const Abstraction& abstraction, const Domain& domain,
                           const std::string& problem_name) {
  validate_abstraction(abstraction, domain);
  Problem problem;
  problem.name = problem_name;
  problem.domain_name = domain.name;
  problem.objects = domain.constants;
  for (const TypedName& obj : abstraction.objects) {
    bool duplicate = false;
    for (const TypedName& seen : problem.objects)
      if (seen == obj) duplicate = true;
    if (!duplicate) problem.objects.push_back(obj);
  }
  problem.init = abstraction.init;
  std::sort(problem.init.begin(), problem.init.end());
  problem.init.erase(std::unique(problem.init.begin(), problem.init.end()),
                     problem.init.end());
  problem.goal = abstraction.goal;
  std::sort(problem.goal.begin(), problem.goal.end());
  problem.goal.erase(std::unique(problem.goal.begin(), problem.goal.end()),
                     problem.goal.end());
  return problem;
}

DriftResult measure_drift(const Domain& reference, const Domain& candidate,
                          std::span<const std::string> problem_texts,
                          long planner_budget, double threshold) {
  auto solvable_under = [&](const Domain& domain, const std::string& text) {
    try {
      Problem problem = parse_problem(text, domain);
      GroundedTask task = ground(domain, problem);
      std::vector<int> all(task.actions.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      LocalResult local =
          astar_subspace(task, all, kInfiniteCost, planner_budget);
      return !local.plans.empty();
    } catch (const ParseError&) {
      return false;
    }
  };

  int lost = 0;
  for (const std::string& text : problem_texts) {
    if (solvable_under(reference, text) && !solvable_under(candidate, text))
      ++lost;
  }
  DriftResult result;
  result.ratio = problem_texts.empty()
                     ? 0.0
                     : static_cast<double>(lost) /
                           static_cast<double>(problem_texts.size());
  result.flagged = result.ratio > threshold;
  return result;
}

}  // namespace plahx
