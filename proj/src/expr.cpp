#include "wg/expr.hpp"

#include "wg/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace wg::expr {

namespace {

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = v;
  return n;
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Offsets are 1-based byte positions; end-of-input reports one past the
  // last byte.
  [[noreturn]] void fail(const std::string& expected) {
    throw ExprParseError(pos_ + 1, expected,
                         "syntax error at offset " + std::to_string(pos_ + 1) + ": expected " +
                             expected);
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(Kind::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make(Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Kind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make(Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Kind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    // Right-associative, and the exponent may carry a unary minus.
    if (accept('^')) return make(Kind::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("a number, 'x', 'y', 'pi', a function call, or '('");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!accept(')')) fail("')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("a number, 'x', 'y', 'pi', a function call, or '('");
  }

  NodePtr parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark; // 'e' belongs to something else, not an exponent
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{}) {
      pos_ = start;
      fail("a valid number literal");
    }
    return make_number(value);
  }

  NodePtr parse_identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Kind::VarX);
    if (name == "y") return make(Kind::VarY);
    if (name == "pi") return make(Kind::Pi);

    Kind kind;
    if (name == "sin")
      kind = Kind::Sin;
    else if (name == "cos")
      kind = Kind::Cos;
    else if (name == "exp")
      kind = Kind::Exp;
    else if (name == "sqrt")
      kind = Kind::Sqrt;
    else {
      pos_ = start;
      throw ExprParseError(start + 1, "a known identifier",
                           "unknown identifier '" + std::string(name) + "' at offset " +
                               std::to_string(start + 1));
    }
    if (!accept('(')) fail("'(' after function name");
    NodePtr arg = parse_expr();
    if (!accept(')')) fail("')'");
    return make(kind, arg);
  }

  std::string_view text_;
  size_t pos_ = 0;
};

int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

void print_rec(const Node& n, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_paren_at_equal,
                 std::string& out) {
  int p = precedence(child.kind);
  bool paren = p < parent_prec || (p == parent_prec && needs_paren_at_equal);
  if (paren) out += '(';
  print_rec(child, out);
  if (paren) out += ')';
}

void print_rec(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Kind::VarX: out += 'x'; return;
    case Kind::VarY: out += 'y'; return;
    case Kind::Pi: out += "pi"; return;
    case Kind::Neg:
      out += '-';
      print_child(*n.lhs, precedence(Kind::Neg), false, out);
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      int p = precedence(n.kind);
      print_child(*n.lhs, p, false, out);
      out += (n.kind == Kind::Add) ? '+' : (n.kind == Kind::Sub) ? '-'
             : (n.kind == Kind::Mul) ? '*' : '/';
      // Left-associative: an equal-precedence right child must keep parens
      // to reproduce the same tree.
      print_child(*n.rhs, p, true, out);
      return;
    }
    case Kind::Pow:
      print_child(*n.lhs, precedence(Kind::Pow), true, out); // right-assoc
      out += '^';
      print_child(*n.rhs, precedence(Kind::Pow), false, out);
      return;
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
    case Kind::Sqrt: {
      out += (n.kind == Kind::Sin)   ? "sin"
             : (n.kind == Kind::Cos) ? "cos"
             : (n.kind == Kind::Exp) ? "exp"
                                     : "sqrt";
      out += '(';
      print_rec(*n.lhs, out);
      out += ')';
      return;
    }
  }
}

} // namespace

NodePtr parse(std::string_view text) { return Parser(text).run(); }

double eval(const Node& node, double x, double y) {
  switch (node.kind) {
    case Kind::Number: return node.number;
    case Kind::VarX: return x;
    case Kind::VarY: return y;
    case Kind::Pi: return 3.14159265358979323846;
    case Kind::Neg: return -eval(*node.lhs, x, y);
    case Kind::Add: return eval(*node.lhs, x, y) + eval(*node.rhs, x, y);
    case Kind::Sub: return eval(*node.lhs, x, y) - eval(*node.rhs, x, y);
    case Kind::Mul: return eval(*node.lhs, x, y) * eval(*node.rhs, x, y);
    case Kind::Div: {
      double denom = eval(*node.rhs, x, y);
      if (denom == 0.0)
        throw Error(ErrorKind::Evaluation, "division by zero in '" + print(node) + "'");
      return eval(*node.lhs, x, y) / denom;
    }
    case Kind::Pow: return std::pow(eval(*node.lhs, x, y), eval(*node.rhs, x, y));
    case Kind::Sin: return std::sin(eval(*node.lhs, x, y));
    case Kind::Cos: return std::cos(eval(*node.lhs, x, y));
    case Kind::Exp: return std::exp(eval(*node.lhs, x, y));
    case Kind::Sqrt: {
      double arg = eval(*node.lhs, x, y);
      if (arg < 0.0)
        throw Error(ErrorKind::Evaluation,
                    "square root of a negative value in '" + print(node) + "'");
      return std::sqrt(arg);
    }
  }
  throw Error(ErrorKind::Evaluation, "corrupt expression node");
}

std::string print(const Node& node) {
  std::string out;
  print_rec(node, out);
  return out;
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::Number && a.number != b.number) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal(*a.rhs, *b.rhs)) return false;
  return true;
}

ScalarField make_field(NodePtr node) {
  return [node](double x, double y) { return eval(*node, x, y); };
}

} // namespace wg::expr
