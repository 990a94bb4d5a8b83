#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace plahx::sexpr {

// Parsed s-expression node. Symbols are lower-cased by the lexer; `line` is
// the 1-based source line of the opening token.
struct Node {
  bool is_list = false;
  std::string symbol;
  std::vector<Node> items;
  int line = 1;

  bool is_symbol() const { return !is_list; }
  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
  const Node& head() const { return items.front(); }
};

// Parses every top-level form in `text`. Comments run from ';' to end of
// line. Throws ParseError(Syntax) on unbalanced parentheses or stray tokens.
std::vector<Node> parse_all(std::string_view text);

// Expects exactly one top-level form.
Node parse_one(std::string_view text);

}  // namespace plahx::sexpr
