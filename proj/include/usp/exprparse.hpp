#pragma once

#include <memory>
#include <string>

#include "usp/errors.hpp"

namespace usp {

// Immutable arithmetic expression over variables x, y.
class Expr {
 public:
  virtual ~Expr() = default;
  virtual double eval(double x, double y) const = 0;
  virtual std::string print() const = 0;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Parses +, -, *, /, ^ (right-associative), unary minus (binds looser
// than ^), parentheses, sin/cos/exp/log/sqrt/abs, constants pi and e,
// variables x and y. Throws ParseError with the byte offset on failure.
ExprPtr parse_expr(const std::string& src);

}  // namespace usp
