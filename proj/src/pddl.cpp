#include "plahx/pddl.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "plahx/sexpr.hpp"

namespace plahx {

using sexpr::Node;

ParseError::ParseError(Kind kind, int line, std::string token,
                       const std::string& message)
    : std::runtime_error([&] {
        const char* label = kind == Kind::Syntax ? "syntax error"
                            : kind == Kind::Unsupported
                                ? "unsupported feature"
                                : "semantic error";
        std::ostringstream os;
        os << label << " at line " << line << " near '" << token
           << "': " << message;
        return os.str();
      }()),
      kind_(kind),
      line_(line),
      token_(std::move(token)) {}

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.pred;
  for (const std::string& a : atom.args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

std::string format_typed_list(const std::vector<TypedName>& entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += entries[i].name;
    // close a run of equal types before the type changes
    bool run_end = i + 1 == entries.size() || entries[i + 1].type != entries[i].type;
    if (run_end && entries[i].type != "object") {
      out += " - ";
      out += entries[i].type;
    }
  }
  return out;
}

const Predicate* Domain::find_predicate(std::string_view pred_name) const {
  for (const Predicate& p : predicates)
    if (p.name == pred_name) return &p;
  return nullptr;
}

bool Domain::has_type(std::string_view type_name) const {
  return type_name == "object" || type_parents.count(std::string(type_name)) > 0;
}

bool Domain::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string cur(type);
  for (std::size_t hops = 0; hops <= type_parents.size() + 1; ++hops) {
    if (cur == ancestor) return true;
    if (cur == "object") return false;
    auto it = type_parents.find(cur);
    if (it == type_parents.end()) return ancestor == "object";
    cur = it->second;
  }
  return false;
}

namespace {

[[noreturn]] void fail(ParseError::Kind kind, const Node& node,
                       const std::string& message) {
  throw ParseError(kind, node.line, node.is_list ? "(" : node.symbol, message);
}

const std::unordered_set<std::string>& reserved_operators() {
  static const std::unordered_set<std::string> ops = {
      "and",      "or",     "not",    "imply",  "forall",
      "exists",   "when",   "=",      "increase", "decrease",
      "assign",   "scale-up", "scale-down", "either", "minimize", "maximize"};
  return ops;
}

bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

void expect_name(const Node& node, const char* what) {
  if (node.is_list || node.symbol.empty())
    fail(ParseError::Kind::Syntax, node, std::string("expected ") + what);
  if (reserved_operators().count(node.symbol))
    fail(ParseError::Kind::Syntax, node,
         std::string("reserved word cannot be used as ") + what);
}

// Reads "n1 n2 - t n3 ..." from items[begin..]; untyped entries get "object".
std::vector<TypedName> parse_typed_list(const std::vector<Node>& items,
                                        std::size_t begin, int list_line,
                                        const char* what) {
  std::vector<TypedName> out;
  std::vector<std::size_t> pending;  // indices into out awaiting a type
  for (std::size_t i = begin; i < items.size(); ++i) {
    const Node& node = items[i];
    if (node.is_list)
      fail(ParseError::Kind::Syntax, node,
           std::string("expected ") + what + " name, found a list");
    if (node.symbol == "-") {
      if (pending.empty())
        fail(ParseError::Kind::Syntax, node, "dangling '-' in typed list");
      if (i + 1 >= items.size())
        throw ParseError(ParseError::Kind::Syntax, list_line, "-",
                         "typed list ends after '-'");
      const Node& type_node = items[++i];
      if (type_node.is_list) {
        if (!type_node.items.empty() && type_node.head().is_symbol("either"))
          fail(ParseError::Kind::Unsupported, type_node,
               "'either' types are not supported");
        fail(ParseError::Kind::Syntax, type_node, "expected a type name");
      }
      for (std::size_t idx : pending) out[idx].type = type_node.symbol;
      pending.clear();
      continue;
    }
    expect_name(node, what);
    pending.push_back(out.size());
    out.push_back({node.symbol, "object"});
  }
  return out;
}

void sort_unique(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

struct SchemaScope {
  const Domain& domain;
  const std::vector<TypedName>& params;

  const TypedName* find_param(const std::string& name) const {
    for (const TypedName& p : params)
      if (p.name == name) return &p;
    return nullptr;
  }
};

// Parses one atom inside a schema body; args are variables from the
// parameter list or declared domain constants.
Atom parse_schema_atom(const Node& node, const SchemaScope& scope) {
  if (!node.is_list || node.items.empty())
    fail(ParseError::Kind::Syntax, node, "expected an atom");
  const Node& head = node.head();
  if (head.is_list) fail(ParseError::Kind::Syntax, head, "expected a predicate name");
  if (reserved_operators().count(head.symbol))
    fail(ParseError::Kind::Unsupported, head,
         "construct '" + head.symbol + "' is outside the STRIPS subset");
  const Predicate* pred = scope.domain.find_predicate(head.symbol);
  if (pred == nullptr)
    fail(ParseError::Kind::Semantic, head, "unknown predicate '" + head.symbol + "'");
  Atom atom;
  atom.pred = head.symbol;
  if (static_cast<int>(node.items.size()) - 1 != pred->arity())
    fail(ParseError::Kind::Semantic, head,
         "predicate '" + pred->name + "' expects " +
             std::to_string(pred->arity()) + " argument(s), got " +
             std::to_string(node.items.size() - 1));
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const Node& arg = node.items[i];
    if (arg.is_list) fail(ParseError::Kind::Syntax, arg, "expected an argument name");
    const std::string& want = pred->param_types[i - 1];
    if (is_variable(arg.symbol)) {
      const TypedName* param = scope.find_param(arg.symbol);
      if (param == nullptr)
        fail(ParseError::Kind::Semantic, arg,
             "variable '" + arg.symbol + "' is not a parameter");
      if (!scope.domain.is_subtype(param->type, want))
        fail(ParseError::Kind::Semantic, arg,
             "variable '" + arg.symbol + "' of type '" + param->type +
                 "' is incompatible with '" + want + "'");
    } else {
      const TypedName* constant = nullptr;
      for (const TypedName& c : scope.domain.constants)
        if (c.name == arg.symbol) constant = &c;
      if (constant == nullptr)
        fail(ParseError::Kind::Semantic, arg,
             "'" + arg.symbol + "' is neither a parameter nor a constant");
      if (!scope.domain.is_subtype(constant->type, want))
        fail(ParseError::Kind::Semantic, arg,
             "constant '" + arg.symbol + "' of type '" + constant->type +
                 "' is incompatible with '" + want + "'");
    }
    atom.args.push_back(arg.symbol);
  }
  return atom;
}

// Positive conjunctive condition: ATOM | (and ATOM*), ands may nest.
void parse_condition(const Node& node, const SchemaScope& scope,
                     std::vector<Atom>& out) {
  if (!node.is_list || node.items.empty()) {
    if (node.is_list && node.items.empty())
      fail(ParseError::Kind::Syntax, node, "empty expression");
    fail(ParseError::Kind::Syntax, node, "expected a condition");
  }
  const Node& head = node.head();
  if (head.is_symbol("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i)
      parse_condition(node.items[i], scope, out);
    return;
  }
  if (head.is_symbol("not"))
    fail(ParseError::Kind::Unsupported, head,
         "negative preconditions are outside the STRIPS subset");
  out.push_back(parse_schema_atom(node, scope));
}

// Effect: LITERAL | (and LITERAL*), where LITERAL = ATOM | (not ATOM).
void parse_effect(const Node& node, const SchemaScope& scope,
                  std::vector<Atom>& adds, std::vector<Atom>& dels) {
  if (!node.is_list || node.items.empty()) {
    if (node.is_list && node.items.empty())
      fail(ParseError::Kind::Syntax, node, "empty expression");
    fail(ParseError::Kind::Syntax, node, "expected an effect");
  }
  const Node& head = node.head();
  if (head.is_symbol("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i)
      parse_effect(node.items[i], scope, adds, dels);
    return;
  }
  if (head.is_symbol("not")) {
    if (node.items.size() != 2)
      fail(ParseError::Kind::Syntax, head, "'not' takes exactly one atom");
    const Node& inner = node.items[1];
    if (inner.is_list && !inner.items.empty() && inner.head().is_symbol("not"))
      fail(ParseError::Kind::Syntax, inner.head(), "nested 'not' in effect");
    dels.push_back(parse_schema_atom(inner, scope));
    return;
  }
  if (head.is_symbol("when") || head.is_symbol("forall"))
    fail(ParseError::Kind::Unsupported, head,
         head.symbol == "when" ? "conditional effects are not supported"
                               : "quantified effects are not supported");
  adds.push_back(parse_schema_atom(node, scope));
}

ActionSchema parse_action(const Node& node, const Domain& domain) {
  if (node.items.size() < 2)
    fail(ParseError::Kind::Syntax, node, ":action requires a name");
  const Node& name_node = node.items[1];
  expect_name(name_node, "action name");

  ActionSchema schema;
  schema.name = name_node.symbol;

  const Node* params_node = nullptr;
  const Node* pre_node = nullptr;
  const Node* eff_node = nullptr;
  for (std::size_t i = 2; i < node.items.size(); i += 2) {
    const Node& key = node.items[i];
    if (key.is_list || key.symbol.empty() || key.symbol[0] != ':')
      fail(ParseError::Kind::Syntax, key, "expected a ':' keyword in action body");
    if (i + 1 >= node.items.size())
      fail(ParseError::Kind::Syntax, key, "keyword '" + key.symbol + "' has no value");
    const Node& value = node.items[i + 1];
    if (key.symbol == ":parameters") {
      if (!value.is_list)
        fail(ParseError::Kind::Syntax, value, ":parameters expects a list");
      params_node = &value;
    } else if (key.symbol == ":precondition") {
      pre_node = &value;
    } else if (key.symbol == ":effect") {
      eff_node = &value;
    } else {
      fail(ParseError::Kind::Unsupported, key,
           "action keyword '" + key.symbol + "' is not supported");
    }
  }
  if (params_node == nullptr)
    fail(ParseError::Kind::Semantic, name_node,
         "action '" + schema.name + "' is missing :parameters");
  if (eff_node == nullptr)
    fail(ParseError::Kind::Semantic, name_node,
         "action '" + schema.name + "' is missing :effect");

  schema.params = parse_typed_list(params_node->items, 0, params_node->line,
                                   "parameter");
  for (const TypedName& p : schema.params) {
    if (!is_variable(p.name))
      throw ParseError(ParseError::Kind::Syntax, params_node->line, p.name,
                       "parameters must be '?' variables");
    if (!domain.has_type(p.type))
      throw ParseError(ParseError::Kind::Semantic, params_node->line, p.type,
                       "unknown type '" + p.type + "'");
    int dups = 0;
    for (const TypedName& q : schema.params)
      if (q.name == p.name) ++dups;
    if (dups > 1)
      throw ParseError(ParseError::Kind::Semantic, params_node->line, p.name,
                       "duplicate parameter '" + p.name + "'");
  }

  SchemaScope scope{domain, schema.params};
  if (pre_node != nullptr) parse_condition(*pre_node, scope, schema.preconditions);
  parse_effect(*eff_node, scope, schema.add_effects, schema.del_effects);

  sort_unique(schema.preconditions);
  sort_unique(schema.add_effects);
  sort_unique(schema.del_effects);
  for (const Atom& a : schema.add_effects)
    if (std::binary_search(schema.del_effects.begin(), schema.del_effects.end(), a))
      fail(ParseError::Kind::Semantic, *eff_node,
           "atom " + to_string(a) + " is both added and deleted by '" +
               schema.name + "'");
  return schema;
}

const Node& expect_define(const Node& root, const char* kind) {
  if (!root.is_list || root.items.empty() || !root.head().is_symbol("define"))
    fail(ParseError::Kind::Syntax, root, "expected a (define ...) form");
  if (root.items.size() < 2 || !root.items[1].is_list ||
      root.items[1].items.size() != 2 || !root.items[1].head().is_symbol(kind))
    fail(ParseError::Kind::Syntax, root,
         std::string("expected (define (") + kind + " <name>) ...)");
  return root.items[1].items[1];
}

}  // namespace

Domain parse_domain(std::string_view text) {
  Node root = sexpr::parse_one(text);
  const Node& name_node = expect_define(root, "domain");
  expect_name(name_node, "domain name");

  Domain domain;
  domain.name = name_node.symbol;

  for (std::size_t s = 2; s < root.items.size(); ++s) {
    const Node& section = root.items[s];
    if (!section.is_list || section.items.empty() || section.head().is_list)
      fail(ParseError::Kind::Syntax, section, "expected a (:section ...) form");
    const std::string& key = section.head().symbol;
    if (key == ":requirements") {
      for (std::size_t i = 1; i < section.items.size(); ++i) {
        const Node& req = section.items[i];
        if (req.is_list) fail(ParseError::Kind::Syntax, req, "expected a requirement");
        if (req.symbol != ":strips" && req.symbol != ":typing")
          fail(ParseError::Kind::Unsupported, req,
               "requirement '" + req.symbol + "' is not supported");
      }
    } else if (key == ":types") {
      std::vector<TypedName> types =
          parse_typed_list(section.items, 1, section.line, "type");
      for (const TypedName& t : types) {
        if (t.name == "object") continue;  // implicit root
        if (domain.type_parents.count(t.name))
          throw ParseError(ParseError::Kind::Semantic, section.line, t.name,
                           "type '" + t.name + "' declared twice");
        domain.type_parents[t.name] = t.type;
      }
      // parents mentioned without their own declaration hang off "object"
      for (const TypedName& t : types)
        if (t.type != "object" && !domain.type_parents.count(t.type))
          domain.type_parents[t.type] = "object";
      for (const auto& [type, parent] : domain.type_parents) {
        std::string cur = type;
        std::size_t hops = 0;
        while (cur != "object") {
          auto it = domain.type_parents.find(cur);
          if (it == domain.type_parents.end()) break;
          cur = it->second;
          if (++hops > domain.type_parents.size())
            throw ParseError(ParseError::Kind::Semantic, section.line, type,
                             "type hierarchy cycle involving '" + type + "'");
        }
        (void)parent;
      }
    } else if (key == ":constants") {
      std::vector<TypedName> consts =
          parse_typed_list(section.items, 1, section.line, "constant");
      for (const TypedName& c : consts) {
        if (!domain.has_type(c.type))
          throw ParseError(ParseError::Kind::Semantic, section.line, c.type,
                           "unknown type '" + c.type + "'");
        for (const TypedName& seen : domain.constants)
          if (seen.name == c.name)
            throw ParseError(ParseError::Kind::Semantic, section.line, c.name,
                             "constant '" + c.name + "' declared twice");
        domain.constants.push_back(c);
      }
    } else if (key == ":predicates") {
      for (std::size_t i = 1; i < section.items.size(); ++i) {
        const Node& decl = section.items[i];
        if (!decl.is_list || decl.items.empty())
          fail(ParseError::Kind::Syntax, decl, "expected a predicate declaration");
        expect_name(decl.head(), "predicate name");
        Predicate pred;
        pred.name = decl.head().symbol;
        if (domain.find_predicate(pred.name) != nullptr)
          fail(ParseError::Kind::Semantic, decl.head(),
               "predicate '" + pred.name + "' declared twice");
        std::vector<TypedName> vars =
            parse_typed_list(decl.items, 1, decl.line, "predicate parameter");
        for (const TypedName& v : vars) {
          if (!is_variable(v.name))
            throw ParseError(ParseError::Kind::Syntax, decl.line, v.name,
                             "predicate parameters must be '?' variables");
          if (!domain.has_type(v.type))
            throw ParseError(ParseError::Kind::Semantic, decl.line, v.type,
                             "unknown type '" + v.type + "'");
          pred.param_types.push_back(v.type);
        }
        domain.predicates.push_back(std::move(pred));
      }
    } else if (key == ":action") {
      ActionSchema schema = parse_action(section, domain);
      for (const ActionSchema& seen : domain.schemas)
        if (seen.name == schema.name)
          fail(ParseError::Kind::Semantic, section.head(),
               "action '" + schema.name + "' declared twice");
      domain.schemas.push_back(std::move(schema));
    } else {
      fail(ParseError::Kind::Unsupported, section.head(),
           "section '" + key + "' is outside the STRIPS+typing subset");
    }
  }
  return domain;
}

namespace {

Atom parse_ground_atom(const Node& node, const Domain& domain,
                       const std::vector<TypedName>& objects) {
  if (!node.is_list || node.items.empty())
    fail(ParseError::Kind::Syntax, node, "expected a ground atom");
  const Node& head = node.head();
  if (head.is_list) fail(ParseError::Kind::Syntax, head, "expected a predicate name");
  if (reserved_operators().count(head.symbol)) {
    if (head.symbol == "=")
      fail(ParseError::Kind::Unsupported, head, "numeric fluents are not supported");
    fail(ParseError::Kind::Unsupported, head,
         "construct '" + head.symbol + "' is outside the STRIPS subset");
  }
  const Predicate* pred = domain.find_predicate(head.symbol);
  if (pred == nullptr)
    fail(ParseError::Kind::Semantic, head, "unknown predicate '" + head.symbol + "'");
  if (static_cast<int>(node.items.size()) - 1 != pred->arity())
    fail(ParseError::Kind::Semantic, head,
         "predicate '" + pred->name + "' expects " +
             std::to_string(pred->arity()) + " argument(s), got " +
             std::to_string(node.items.size() - 1));
  Atom atom;
  atom.pred = head.symbol;
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const Node& arg = node.items[i];
    if (arg.is_list) fail(ParseError::Kind::Syntax, arg, "expected an object name");
    if (is_variable(arg.symbol))
      fail(ParseError::Kind::Semantic, arg,
           "variable '" + arg.symbol + "' in a ground atom");
    const TypedName* object = nullptr;
    for (const TypedName& o : objects)
      if (o.name == arg.symbol) object = &o;
    if (object == nullptr)
      fail(ParseError::Kind::Semantic, arg, "unknown object '" + arg.symbol + "'");
    if (!domain.is_subtype(object->type, pred->param_types[i - 1]))
      fail(ParseError::Kind::Semantic, arg,
           "object '" + object->name + "' of type '" + object->type +
               "' is incompatible with '" + pred->param_types[i - 1] + "'");
    atom.args.push_back(arg.symbol);
  }
  return atom;
}

void parse_goal_node(const Node& node, const Domain& domain,
                     const std::vector<TypedName>& objects,
                     std::vector<Atom>& out) {
  if (node.is_list && !node.items.empty() && node.head().is_symbol("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i)
      parse_goal_node(node.items[i], domain, objects, out);
    return;
  }
  if (node.is_list && !node.items.empty() && node.head().is_symbol("not"))
    fail(ParseError::Kind::Unsupported, node.head(),
         "negative goals are outside the STRIPS subset");
  out.push_back(parse_ground_atom(node, domain, objects));
}

}  // namespace

Problem parse_problem(std::string_view text, const Domain& domain) {
  Node root = sexpr::parse_one(text);
  const Node& name_node = expect_define(root, "problem");
  expect_name(name_node, "problem name");

  Problem problem;
  problem.name = name_node.symbol;
  problem.objects = domain.constants;

  bool saw_domain = false;
  const Node* goal_node = nullptr;
  for (std::size_t s = 2; s < root.items.size(); ++s) {
    const Node& section = root.items[s];
    if (!section.is_list || section.items.empty() || section.head().is_list)
      fail(ParseError::Kind::Syntax, section, "expected a (:section ...) form");
    const std::string& key = section.head().symbol;
    if (key == ":domain") {
      if (section.items.size() != 2 || section.items[1].is_list)
        fail(ParseError::Kind::Syntax, section, ":domain expects one name");
      problem.domain_name = section.items[1].symbol;
      if (problem.domain_name != domain.name)
        fail(ParseError::Kind::Semantic, section.items[1],
             "problem references domain '" + problem.domain_name +
                 "' but was parsed against '" + domain.name + "'");
      saw_domain = true;
    } else if (key == ":objects") {
      std::vector<TypedName> declared =
          parse_typed_list(section.items, 1, section.line, "object");
      for (const TypedName& o : declared) {
        if (!domain.has_type(o.type))
          throw ParseError(ParseError::Kind::Semantic, section.line, o.type,
                           "unknown type '" + o.type + "'");
        bool duplicate = false;
        for (const TypedName& seen : problem.objects) {
          if (seen.name != o.name) continue;
          if (seen.type == o.type) {
            duplicate = true;  // re-declared constant, identical: fold silently
            break;
          }
          throw ParseError(ParseError::Kind::Semantic, section.line, o.name,
                           "object '" + o.name + "' declared twice");
        }
        if (!duplicate) problem.objects.push_back(o);
      }
    } else if (key == ":init") {
      for (std::size_t i = 1; i < section.items.size(); ++i)
        problem.init.push_back(
            parse_ground_atom(section.items[i], domain, problem.objects));
    } else if (key == ":goal") {
      if (section.items.size() != 2)
        fail(ParseError::Kind::Syntax, section, ":goal expects one condition");
      goal_node = &section.items[1];
    } else {
      fail(ParseError::Kind::Unsupported, section.head(),
           "section '" + key + "' is outside the STRIPS subset");
    }
  }
  if (!saw_domain)
    fail(ParseError::Kind::Semantic, root, "problem is missing (:domain ...)");
  if (goal_node == nullptr)
    fail(ParseError::Kind::Semantic, root, "problem is missing (:goal ...)");

  parse_goal_node(*goal_node, domain, problem.objects, problem.goal);
  if (problem.goal.empty())
    fail(ParseError::Kind::Semantic, *goal_node,
         "goal must contain at least one atom");

  sort_unique(problem.init);  // duplicate init atoms fold silently
  sort_unique(problem.goal);
  return problem;
}

namespace {

void append_atoms(std::string& out, const std::vector<Atom>& atoms,
                  const char* indent) {
  for (const Atom& a : atoms) {
    out += indent;
    out += to_string(a);
    out += '\n';
  }
}

}  // namespace

std::string serialize(const Domain& domain) {
  std::string out = "(define (domain " + domain.name + ")\n";
  out += "  (:requirements :strips :typing)\n";
  if (!domain.type_parents.empty()) {
    // grouped by parent; groups and members in name order
    std::map<std::string, std::vector<std::string>> by_parent;
    for (const auto& [type, parent] : domain.type_parents)
      by_parent[parent].push_back(type);
    out += "  (:types";
    for (const auto& [parent, members] : by_parent) {
      if (parent == "object") continue;
      for (const std::string& m : members) out += ' ' + m;
      out += " - " + parent;
    }
    auto root = by_parent.find("object");
    if (root != by_parent.end())
      for (const std::string& m : root->second) out += ' ' + m;
    out += ")\n";
  }
  if (!domain.constants.empty())
    out += "  (:constants " + format_typed_list(domain.constants) + ")\n";
  if (!domain.predicates.empty()) {
    out += "  (:predicates\n";
    for (const Predicate& p : domain.predicates) {
      out += "    (" + p.name;
      for (std::size_t i = 0; i < p.param_types.size(); ++i) {
        out += " ?v" + std::to_string(i);
        if (p.param_types[i] != "object") out += " - " + p.param_types[i];
      }
      out += ")\n";
    }
    out += "  )\n";
  }
  for (const ActionSchema& schema : domain.schemas) {
    out += "  (:action " + schema.name + "\n";
    out += "    :parameters (" + format_typed_list(schema.params) + ")\n";
    if (!schema.preconditions.empty()) {
      out += "    :precondition (and";
      for (const Atom& a : schema.preconditions) out += ' ' + to_string(a);
      out += ")\n";
    }
    out += "    :effect (and";
    for (const Atom& a : schema.add_effects) out += ' ' + to_string(a);
    for (const Atom& a : schema.del_effects) out += " (not " + to_string(a) + ")";
    out += "))\n";
  }
  out += ")\n";
  return out;
}

std::string serialize(const Problem& problem) {
  std::string out = "(define (problem " + problem.name + ")\n";
  out += "  (:domain " + problem.domain_name + ")\n";
  out += "  (:objects " + format_typed_list(problem.objects) + ")\n";
  out += "  (:init\n";
  append_atoms(out, problem.init, "    ");
  out += "  )\n";
  out += "  (:goal (and";
  for (const Atom& a : problem.goal) out += ' ' + to_string(a);
  out += "))\n)\n";
  return out;
}

}  // namespace plahx
