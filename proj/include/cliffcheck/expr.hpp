#pragma once

// Scalar expressions in the coordinates x0..x3.
//
// Grammar (precedence high to low): function call / parentheses, '^'
// (right-associative, exponent may carry a unary sign), unary '-', '*' '/',
// '+' '-'. Hence "-x0^2" is -(x0^2) and "2^-1" is 2^(-1).

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "cliffcheck/errors.hpp"
#include "cliffcheck/linalg.hpp"

namespace cliffcheck {

enum class NodeKind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

const char* function_name(Function f);

class Expression {
 public:
  struct Node;

  Expression();  // the literal 0

  static Expression number(double v);
  static Expression variable(int index);
  static Expression unary(NodeKind kind, Expression operand);
  static Expression binary(NodeKind kind, Expression lhs, Expression rhs);
  static Expression call(Function f, Expression arg);

  NodeKind kind() const;
  double number_value() const;
  int variable_index() const;
  Function function() const;
  Expression lhs() const;  // operand for Neg and Call
  Expression rhs() const;

  bool is_zero_literal() const;

  /// Structural equality of the syntax trees.
  friend bool operator==(const Expression& a, const Expression& b);

  /// Prints in a form that parses back to the same tree.
  std::string to_string() const;

 private:
  explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::set<std::string> expected, const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

Expression parse_expression(std::string_view text);

/// Value, gradient and Hessian at x. Throws DomainError naming the function
/// and argument when x lies outside the expression's domain.
Jet2 eval_jet(const Expression& e, const Vec<double, 4>& x);

}  // namespace cliffcheck
