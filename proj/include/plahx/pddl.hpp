#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plahx {

// Raised by the PDDL and abstraction parsers. Carries the offending token
// and its 1-based line so callers can report exact locations.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Unsupported, Semantic };

  ParseError(Kind kind, int line, std::string token, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  const std::string& token() const { return token_; }

 private:
  Kind kind_;
  int line_;
  std::string token_;
};

struct Predicate {
  std::string name;
  std::vector<std::string> param_types;

  int arity() const { return static_cast<int>(param_types.size()); }
  bool operator==(const Predicate&) const = default;
};

struct Atom {
  std::string pred;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& atom);  // "(pred a b)"

// Ground atoms with set semantics: kept sorted and duplicate-free.
using State = std::vector<Atom>;

struct TypedName {
  std::string name;
  std::string type;

  auto operator<=>(const TypedName&) const = default;
};

// "b1 b2 - block w1 - bowl"; empty string for an empty list
std::string format_typed_list(const std::vector<TypedName>& entries);

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Atom> preconditions;  // positive atoms, sorted
  std::vector<Atom> add_effects;    // sorted, disjoint from del_effects
  std::vector<Atom> del_effects;

  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::map<std::string, std::string> type_parents;  // type -> parent, acyclic
  std::vector<TypedName> constants;                 // folded into problem objects
  std::vector<Predicate> predicates;
  std::vector<ActionSchema> schemas;

  const Predicate* find_predicate(std::string_view pred_name) const;
  bool has_type(std::string_view type_name) const;
  // true when `type` is `ancestor` or derives from it; "object" is the root
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  bool operator==(const Domain&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;  // domain constants first, then declared
  State init;
  std::vector<Atom> goal;  // non-empty, sorted

  bool operator==(const Problem&) const = default;
};

// Accepts the STRIPS+typing subset described in docs/grammar.md; anything
// outside it is rejected with the offending token, never dropped.
Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);

// parse(serialize(x)) is structurally equal to x.
std::string serialize(const Domain& domain);
std::string serialize(const Problem& problem);

}  // namespace plahx
