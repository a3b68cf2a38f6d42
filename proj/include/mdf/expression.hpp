#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace mdf {

/// Immutable closed-form expression in the single variable `q`.
///
/// Grammar (whitespace insignificant):
///
///   expr    ::= term { ("+" | "-") term }
///   term    ::= unary { ("*" | "/") unary }
///   unary   ::= ("+" | "-") unary | power
///   power   ::= primary [ "^" unary ]          (right associative)
///   primary ::= number | "q" | "sqrt" "(" expr ")" | "(" expr ")"
///   number  ::= digit { digit } [ "." { digit } ] [ ("e" | "E") [ "+" | "-" ] digit { digit } ]
///             | "." digit { digit } [ exponent ]
///
/// A minus applied directly to a literal folds into it, so "-3" is the constant -3.
/// Evaluation follows IEEE-754 semantics, so `20/sqrt(2*q)` yields +inf at q = 0.
/// Copies share the immutable tree.
class Expression {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sqrt };
  struct Node;

  /// The constant 0.
  Expression();

  /// Throws ParseError (with byte offset) on malformed input or unknown identifiers.
  static Expression parse(std::string_view text);
  static Expression constant(double value);

  double operator()(double q) const;

  /// Fully parenthesised rendering that parses back to an equal tree.
  std::string to_string() const;

  Kind kind() const;
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace mdf
