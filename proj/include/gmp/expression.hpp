#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "gmp/types.hpp"

namespace gmp {

/// Syntax or semantic error in scenario text, with a 1-based position.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& message, int line, int column);
  int line;
  int column;
  std::string message;
};

/// Closed-form expression over (t, x, y).
///
/// Grammar (usual precedence, ^ binds tightest and associates right):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Names: t, x, y, pi, e. Functions: sin cos tan exp log sqrt abs tanh,
/// min(a, b), max(a, b), pow(a, b), step(a) (1 for a >= 0, else 0) and
/// if(c, a, b) (a when c > 0, else b).
class Expression {
 public:
  Expression();  // the constant 0
  static Expression parse(std::string_view text, int line = 1, int column_offset = 0);
  static Expression constant(double value);

  double operator()(double t, double x, double y) const;
  double operator()(double t, Vec2 p) const { return (*this)(t, p.x, p.y); }

  const std::string& text() const { return text_; }
  bool depends_on_time() const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace gmp
