#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plahx/pddl.hpp"

namespace plahx {

// Minimal symbolic abstraction of a task: objects, initial atoms, goal atoms.
struct Abstraction {
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;

  bool operator==(const Abstraction&) const = default;
};

struct Shot {
  std::string task;         // natural-language description
  std::string abstraction;  // target wire text
};

// Few-shot prompt: [u_1, z_1, ..., u_k, z_k, u_query] under fixed delimiters
// (see docs/grammar.md).
struct PromptBundle {
  std::vector<Shot> shots;
  std::string query;

  std::string render() const;
};

// Validates shot well-formedness (no empty task or abstraction text).
PromptBundle build_prompt(std::vector<Shot> shots, std::string query);

using TokenCounter = std::function<long(std::string_view)>;

// Default approximation: ceil(bytes / 4). Exact tokenizers plug in through
// TranslatorConfig.
long count_tokens(std::string_view text);

// prompt + completion strictly above the context limit
inline bool check_overflow(long prompt_tokens, long completion_tokens,
                           long context_limit) {
  return prompt_tokens + completion_tokens > context_limit;
}

struct TokenStats {
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

struct TranslationOutcome {
  enum class Kind { Success, SyntaxError, SemanticError, ContextOverflow };

  Kind kind = Kind::Success;
  Abstraction abstraction;  // Success only
  TokenStats tokens;
  std::string detail;       // error classes only
};

std::string_view to_string(TranslationOutcome::Kind kind);

struct TranslatorConfig {
  long context_limit = 5000;  // ℓ_max, tokens
  double temperature = 0.0;
  int shot_count = 6;
  std::vector<Shot> shots;  // pool; the first shot_count entries are used
  TokenCounter tokenizer;   // empty -> default bytes/4 rule
};

// Transport failure, distinct from the translation outcome classes.
struct ClientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const std::string& prompt, double temperature,
                               long max_tokens) = 0;
};

// Offline client reading <dir>/<instance-id>.completion.txt.
class MockClient : public CompletionClient {
 public:
  MockClient(std::filesystem::path fixture_dir, std::string instance_id);
  std::string complete(const std::string& prompt, double temperature,
                       long max_tokens) override;

 private:
  std::filesystem::path path_;
};

// Canned completion, for tests.
class FixedClient : public CompletionClient {
 public:
  explicit FixedClient(std::string completion)
      : completion_(std::move(completion)) {}
  std::string complete(const std::string&, double, long) override {
    return completion_;
  }

 private:
  std::string completion_;
};

// POSTs {"prompt", "temperature", "max_tokens"} as JSON; the bearer token is
// read from the environment variable named by `token_env` when present. The
// completion is the first text segment of the response body.
class HttpClient : public CompletionClient {
 public:
  explicit HttpClient(std::string url, std::string token_env = "PLAHX_API_TOKEN");
  std::string complete(const std::string& prompt, double temperature,
                       long max_tokens) override;

 private:
  std::string url_;
  std::string token_env_;
};

// Strict abstraction grammar: exactly (:objects ...) (:init ...) (:goal ...)
// in that order. Throws ParseError(Syntax) on any deviation.
Abstraction parse_abstraction(std::string_view text);

// Domain-consistency checks: known types and predicates, matching arity,
// declared objects. Throws ParseError(Semantic).
void validate_abstraction(const Abstraction& abstraction, const Domain& domain);

// Canonical wire form of an abstraction (the few-shot target format).
std::string abstraction_to_text(const Abstraction& abstraction);

// The abstraction a gold problem file corresponds to.
Abstraction abstraction_of(const Problem& problem);

// Builds the prompt, requests a completion (transport failures retried twice
// with a fixed backoff, then surfaced as ClientError), applies the overflow
// check, and parses + validates the completion into exactly one outcome
// class.
TranslationOutcome translate(const std::string& instruction,
                             const Domain& domain,
                             const TranslatorConfig& config,
                             CompletionClient& client);

// Embeds a validated abstraction into a problem; the result serializes to
// parseable PDDL and round-trips.
Problem embed_into_problem(const Abstraction& abstraction, const Domain& domain,
                           const std::string& problem_name);

struct DriftResult {
  double ratio = 0.0;
  bool flagged = false;
};

// Fraction of reference-solvable problems that fail to parse, ground, or
// solve within the planner budget under the candidate domain. Flagged when
// the ratio exceeds the threshold.
DriftResult measure_drift(const Domain& reference, const Domain& candidate,
                          std::span<const std::string> problem_texts,
                          long planner_budget, double threshold = 0.01);

}  // namespace plahx
