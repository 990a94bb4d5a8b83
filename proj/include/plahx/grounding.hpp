#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "plahx/pddl.hpp"

namespace plahx {

struct PlanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionViolated : PlanningError {
  using PlanningError::PlanningError;
};

struct UnknownActionId : PlanningError {
  using PlanningError::PlanningError;
};

// Set of ground-atom ids over a fixed universe, stored as a bitset.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe_size() const { return universe_; }

  void insert(int id) { words_[id >> 6] |= std::uint64_t{1} << (id & 63); }
  void erase(int id) { words_[id >> 6] &= ~(std::uint64_t{1} << (id & 63)); }
  bool contains(int id) const {
    return (words_[id >> 6] >> (id & 63)) & 1u;
  }

  bool is_superset_of(const AtomSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((other.words_[i] & ~words_[i]) != 0) return false;
    return true;
  }

  bool intersects(const AtomSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }

  void unite(const AtomSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  }

  void intersect(const AtomSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  }

  void subtract(const AtomSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  }

  std::size_t count() const;
  std::vector<int> ids() const;  // ascending

  bool operator==(const AtomSet&) const = default;

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const { return s.hash(); }
};

struct GroundedAction {
  int id = -1;
  std::string schema_name;
  std::vector<std::string> binding;
  AtomSet pre, add, del;  // add and del are disjoint

  std::string name() const;  // "(schema obj1 obj2)"
};

struct GroundedTask {
  std::string domain_name;
  std::string problem_name;
  std::vector<TypedName> objects;
  std::vector<std::string> atom_names;  // atom id -> "(pred a b)"
  std::vector<GroundedAction> actions;  // ids dense, 0..N-1
  AtomSet init, goal;
  std::unordered_map<std::string, int> action_index;  // name() -> id

  std::size_t atom_count() const { return atom_names.size(); }
  const std::string& atom_name(int id) const { return atom_names[id]; }
};

// Instantiates every type-consistent binding exactly once; index order is
// schema declaration order, then lexicographic over the binding tuple.
// Repeated-object bindings are kept; runtime preconditions filter them.
GroundedTask ground(const Domain& domain, const Problem& problem);

inline bool applicable(const AtomSet& state, const GroundedAction& a) {
  return state.is_superset_of(a.pre);
}

// (state \ del) ∪ add; the input state is left untouched.
AtomSet apply(const AtomSet& state, const GroundedAction& a);

// Goal-contributing or applicable in the initial state.
bool is_critical(const GroundedAction& a, const GroundedTask& task);

struct ValidationOutcome {
  enum class Kind {
    Success,
    GoalUnsatisfied,
    PreconditionConflict,
    PreconditionUnsupported,
  };

  Kind kind = Kind::Success;
  AtomSet final_state;            // Success, GoalUnsatisfied
  std::vector<int> missing_goal;  // GoalUnsatisfied
  int step = -1;                  // failing plan position i
  int culprit = -1;               // position k < i whose delete caused it
  int atom = -1;                  // missing precondition atom id
};

// Simulates the plan from init. The first inapplicable step is attributed to
// the most recent earlier step that deleted a missing precondition atom;
// with no such deleter the precondition is unsupported.
ValidationOutcome validate_plan(const GroundedTask& task,
                                std::span<const int> plan);

// VAL-compatible plan text: one "(schema obj ...)" per line.
std::string plan_to_text(const GroundedTask& task, std::span<const int> plan);
std::vector<int> plan_from_text(const GroundedTask& task, std::string_view text);

}  // namespace plahx
