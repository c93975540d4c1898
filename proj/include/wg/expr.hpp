#pragma once

#include "wg/fields.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace wg::expr {

// Coefficient expression AST: variables x, y; constant pi; + - * / ^ with ^
// right-associative and binding tighter than unary minus; functions sin, cos,
// exp, sqrt.
enum class Kind { Number, VarX, VarY, Pi, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  double number = 0.0;
  NodePtr lhs;
  NodePtr rhs;
};

// Throws ExprParseError (with byte offset and expected-token set) on bad
// syntax, unknown identifiers, or trailing input.
NodePtr parse(std::string_view text);

// Division by zero and square roots of negatives throw an evaluation error
// naming the offending subexpression.
double eval(const Node& node, double x, double y);

// Prints with minimal parentheses; parse(print(parse(s))) equals parse(s).
std::string print(const Node& node);

bool equal(const Node& a, const Node& b);

ScalarField make_field(NodePtr node);

} // namespace wg::expr
