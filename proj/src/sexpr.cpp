#include "plahx/sexpr.hpp"

#include <cctype>

#include "plahx/pddl.hpp"

namespace plahx::sexpr {

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;

  void skip_blanks() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (c == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_blanks();
    return pos >= text.size();
  }

  Node read() {
    skip_blanks();
    if (pos >= text.size())
      throw ParseError(ParseError::Kind::Syntax, line, "<eof>",
                       "unexpected end of input");
    int at = line;
    char c = text[pos];
    if (c == ')')
      throw ParseError(ParseError::Kind::Syntax, at, ")",
                       "unmatched closing parenthesis");
    if (c == '(') {
      ++pos;
      Node node;
      node.is_list = true;
      node.line = at;
      for (;;) {
        skip_blanks();
        if (pos >= text.size())
          throw ParseError(ParseError::Kind::Syntax, at, "(",
                           "unbalanced parenthesis: list opened here never closed");
        if (text[pos] == ')') {
          ++pos;
          return node;
        }
        node.items.push_back(read());
      }
    }
    // symbol: run of non-space, non-paren, non-comment characters
    std::size_t start = pos;
    while (pos < text.size()) {
      char s = text[pos];
      if (s == '(' || s == ')' || s == ';' ||
          std::isspace(static_cast<unsigned char>(s)))
        break;
      ++pos;
    }
    Node node;
    node.line = at;
    node.symbol.reserve(pos - start);
    for (std::size_t i = start; i < pos; ++i)
      node.symbol.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(text[i]))));
    return node;
  }
};

}  // namespace

std::vector<Node> parse_all(std::string_view text) {
  Lexer lex{text};
  std::vector<Node> nodes;
  while (!lex.eof()) nodes.push_back(lex.read());
  return nodes;
}

Node parse_one(std::string_view text) {
  std::vector<Node> nodes = parse_all(text);
  if (nodes.empty())
    throw ParseError(ParseError::Kind::Syntax, 1, "<eof>", "empty input");
  if (nodes.size() > 1)
    throw ParseError(ParseError::Kind::Syntax, nodes[1].line,
                     nodes[1].is_list ? "(" : nodes[1].symbol,
                     "trailing content after first form");
  return std::move(nodes.front());
}

}  // namespace plahx::sexpr
