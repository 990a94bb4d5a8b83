#include "plahx/grounding.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace plahx {

std::size_t AtomSet::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<int> AtomSet::ids() const {
  std::vector<int> out;
  out.reserve(count());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      int b = std::countr_zero(bits);
      out.push_back(static_cast<int>(w * 64) + b);
      bits &= bits - 1;
    }
  }
  return out;
}

std::string GroundedAction::name() const {
  std::string out = "(" + schema_name;
  for (const std::string& obj : binding) {
    out += ' ';
    out += obj;
  }
  out += ')';
  return out;
}

namespace {

struct AtomInterner {
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> names;

  int intern(const Atom& atom) {
    std::string key = to_string(atom);
    auto [it, fresh] = ids.emplace(std::move(key), static_cast<int>(names.size()));
    if (fresh) names.push_back(it->first);
    return it->second;
  }
};

struct ProtoAction {
  std::string schema_name;
  std::vector<std::string> binding;
  std::vector<int> pre, add, del;
};

Atom substitute(const Atom& schema_atom, const std::vector<TypedName>& params,
                const std::vector<std::string>& binding) {
  Atom ground = schema_atom;
  for (std::string& arg : ground.args) {
    if (arg.empty() || arg[0] != '?') continue;  // constant stays as-is
    for (std::size_t p = 0; p < params.size(); ++p) {
      if (params[p].name == arg) {
        arg = binding[p];
        break;
      }
    }
  }
  return ground;
}

}  // namespace

GroundedTask ground(const Domain& domain, const Problem& problem) {
  GroundedTask task;
  task.domain_name = domain.name;
  task.problem_name = problem.name;
  task.objects = problem.objects;

  AtomInterner interner;
  std::vector<int> init_ids, goal_ids;
  for (const Atom& a : problem.init) init_ids.push_back(interner.intern(a));
  for (const Atom& a : problem.goal) goal_ids.push_back(interner.intern(a));

  std::vector<ProtoAction> protos;
  for (const ActionSchema& schema : domain.schemas) {
    // candidate objects per parameter, lexicographic by name
    std::vector<std::vector<std::string>> candidates(schema.params.size());
    bool groundable = true;
    for (std::size_t p = 0; p < schema.params.size(); ++p) {
      for (const TypedName& obj : task.objects)
        if (domain.is_subtype(obj.type, schema.params[p].type))
          candidates[p].push_back(obj.name);
      std::sort(candidates[p].begin(), candidates[p].end());
      if (candidates[p].empty()) groundable = false;
    }
    if (!groundable) continue;

    std::vector<std::size_t> odometer(schema.params.size(), 0);
    for (;;) {
      ProtoAction proto;
      proto.schema_name = schema.name;
      for (std::size_t p = 0; p < schema.params.size(); ++p)
        proto.binding.push_back(candidates[p][odometer[p]]);
      for (const Atom& a : schema.preconditions)
        proto.pre.push_back(
            interner.intern(substitute(a, schema.params, proto.binding)));
      for (const Atom& a : schema.add_effects)
        proto.add.push_back(
            interner.intern(substitute(a, schema.params, proto.binding)));
      for (const Atom& a : schema.del_effects)
        proto.del.push_back(
            interner.intern(substitute(a, schema.params, proto.binding)));
      protos.push_back(std::move(proto));

      // advance, rightmost position fastest
      std::size_t p = schema.params.size();
      while (p > 0) {
        --p;
        if (++odometer[p] < candidates[p].size()) break;
        odometer[p] = 0;
        if (p == 0) goto schema_done;
      }
      if (schema.params.empty()) break;  // single empty binding
    }
  schema_done:;
  }

  const std::size_t universe = interner.names.size();
  task.atom_names = std::move(interner.names);
  task.init = AtomSet(universe);
  for (int id : init_ids) task.init.insert(id);
  task.goal = AtomSet(universe);
  for (int id : goal_ids) task.goal.insert(id);

  task.actions.reserve(protos.size());
  for (ProtoAction& proto : protos) {
    GroundedAction action;
    action.id = static_cast<int>(task.actions.size());
    action.schema_name = std::move(proto.schema_name);
    action.binding = std::move(proto.binding);
    action.pre = AtomSet(universe);
    action.add = AtomSet(universe);
    action.del = AtomSet(universe);
    for (int id : proto.pre) action.pre.insert(id);
    for (int id : proto.add) action.add.insert(id);
    for (int id : proto.del) action.del.insert(id);
    // distinct schema atoms can unify under repeated bindings; add wins,
    // matching (state \ del) ∪ add
    action.del.subtract(action.add);
    task.action_index.emplace(action.name(), action.id);
    task.actions.push_back(std::move(action));
  }
  return task;
}

AtomSet apply(const AtomSet& state, const GroundedAction& a) {
  if (!applicable(state, a))
    throw PreconditionViolated("apply: action " + a.name() +
                               " is not applicable in the given state");
  AtomSet next = state;
  next.subtract(a.del);
  next.unite(a.add);
  return next;
}

bool is_critical(const GroundedAction& a, const GroundedTask& task) {
  return a.add.intersects(task.goal) || applicable(task.init, a);
}

ValidationOutcome validate_plan(const GroundedTask& task,
                                std::span<const int> plan) {
  for (int id : plan)
    if (id < 0 || id >= static_cast<int>(task.actions.size()))
      throw UnknownActionId("validate_plan: action id " + std::to_string(id) +
                            " out of range");

  AtomSet state = task.init;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const GroundedAction& action = task.actions[plan[i]];
    if (!applicable(state, action)) {
      AtomSet missing = action.pre;
      missing.subtract(state);
      // most recent deleter of any missing atom; among atoms sharing that
      // deleter, the lowest atom id
      for (int k = static_cast<int>(i) - 1; k >= 0; --k) {
        const GroundedAction& earlier = task.actions[plan[k]];
        if (!earlier.del.intersects(missing)) continue;
        AtomSet hit = missing;
        hit.intersect(earlier.del);
        ValidationOutcome out;
        out.kind = ValidationOutcome::Kind::PreconditionConflict;
        out.step = static_cast<int>(i);
        out.culprit = k;
        out.atom = hit.ids().front();
        return out;
      }
      ValidationOutcome out;
      out.kind = ValidationOutcome::Kind::PreconditionUnsupported;
      out.step = static_cast<int>(i);
      out.atom = missing.ids().front();
      return out;
    }
    state = apply(state, action);
  }

  ValidationOutcome out;
  out.final_state = state;
  if (state.is_superset_of(task.goal)) {
    out.kind = ValidationOutcome::Kind::Success;
    return out;
  }
  out.kind = ValidationOutcome::Kind::GoalUnsatisfied;
  AtomSet missing = task.goal;
  missing.subtract(state);
  out.missing_goal = missing.ids();
  return out;
}

std::string plan_to_text(const GroundedTask& task, std::span<const int> plan) {
  std::string out;
  for (int id : plan) {
    if (id < 0 || id >= static_cast<int>(task.actions.size()))
      throw UnknownActionId("plan_to_text: action id " + std::to_string(id) +
                            " out of range");
    out += task.actions[id].name();
    out += '\n';
  }
  return out;
}

std::vector<int> plan_from_text(const GroundedTask& task,
                                std::string_view text) {
  std::vector<int> plan;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto sc = line.find(';'); sc != std::string::npos) line = line.substr(0, sc);
    // normalize: lower-case, single spaces inside the parens
    std::string norm;
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!norm.empty() && norm.back() != ' ' && norm.back() != '(')
          norm += ' ';
      } else {
        norm += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    while (!norm.empty() && norm.back() == ' ') norm.pop_back();
    if (norm.empty()) continue;
    if (norm.size() >= 2 && norm[norm.size() - 2] == ' ' && norm.back() == ')') {
      norm.erase(norm.size() - 2, 1);
    }
    auto it = task.action_index.find(norm);
    if (it == task.action_index.end())
      throw UnknownActionId("plan line " + std::to_string(line_no) +
                            ": unknown action '" + norm + "'");
    plan.push_back(it->second);
  }
  return plan;
}

}  // namespace plahx
