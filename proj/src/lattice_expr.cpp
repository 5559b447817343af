#include "plaque/lattice_expr.hpp"

#include <cctype>

#include "plaque/error.hpp"

namespace plaque::seqlat {

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool eat_word(const char* w) {
    skip_ws();
    size_t n = std::string(w).size();
    if (text.compare(pos, n, w) == 0) {
      pos += n;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw Error("ParseError", why + " at offset " + std::to_string(pos) + " in \"" + text + "\"");
  }

  long long parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    return std::stoll(text.substr(start, pos - start));
  }

  TailClass parse_primary() {
    skip_ws();
    if (eat('(')) {
      TailClass v = parse_or();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (eat('!')) return negate(parse_primary());
    if (eat_word("sq")) {
      if (!eat('(')) fail("expected '(' after sq");
      long long n = parse_int();
      if (!eat(')')) fail("expected ')'");
      return sq_class(n);
    }
    if (eat_word("shift")) {
      if (!eat('(')) fail("expected '(' after shift");
      long long m = parse_int();
      if (!eat(',')) fail("expected ',' in shift(m, expr)");
      TailClass v = parse_or();
      if (!eat(')')) fail("expected ')'");
      return shift_class(v, m);
    }
    if (eat_word("p=")) {
      // literal class: p=K;w=bits
      size_t start = pos - 2;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == ';' || text[pos] == '='))
        ++pos;
      return TailClass::parse(text.substr(start, pos - start));
    }
    if (eat('0')) return TailClass::zero();
    if (eat('1')) return TailClass::one();
    fail("expected atom");
  }

  TailClass parse_and() {
    TailClass v = parse_primary();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '&') {
        ++pos;
        v = meet(v, parse_primary());
      } else {
        return v;
      }
    }
  }

  TailClass parse_or() {
    TailClass v = parse_and();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        v = join(v, parse_and());
      } else {
        return v;
      }
    }
  }

  ExprValue parse_top() {
    TailClass lhs = parse_or();
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '<' && text[pos + 1] == '=') {
      pos += 2;
      TailClass rhs = parse_or();
      skip_ws();
      if (pos != text.size()) fail("trailing input after comparison");
      return leq(lhs, rhs);
    }
    if (pos != text.size()) fail("trailing input");
    return lhs;
  }
};

}  // namespace

ExprValue eval_lattice_expr(const std::string& text) {
  Parser p{text};
  return p.parse_top();
}

}  // namespace plaque::seqlat
