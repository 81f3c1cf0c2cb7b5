#pragma once

#include <memory>
#include <string>

#include "ruled/types.hpp"

namespace ruled {

/// Parsed scalar expression in a single free variable.
///
/// Grammar: +, -, *, /, ^ (right-associative, binds tightest), unary
/// minus (looser than ^), parentheses, the functions sin cos tan sqrt
/// exp log abs atan, and the constants pi and e.  No implicit
/// multiplication.  Values are immutable after parse and safe to
/// evaluate concurrently.
class Expr {
 public:
  Expr() = default;

  /// Parses `text`; the free variable is `var` (default "s").
  /// Throws ParseError with the byte offset of the first bad token.
  static Expr parse(const std::string& text, const std::string& var = "s");

  /// Evaluates at x.  Domain violations (sqrt of a negative, log of a
  /// non-positive value, division by zero) throw EvalError; results are
  /// never silent NaN.
  double eval(double x) const;

  /// Unparses to a string such that parse(print()) evaluates
  /// identically at every point.
  std::string print() const;

  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;  // original source, kept for serialization
};

}  // namespace ruled
