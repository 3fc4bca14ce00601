#include "cliffcheck/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cliffcheck/linalg.hpp"

namespace cliffcheck {

struct Expression::Node {
  NodeKind kind = NodeKind::Number;
  double value = 0.0;
  int var = 0;
  Function fn = Function::Sin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

constexpr struct {
  Function fn;
  const char* name;
} kFunctions[] = {
    {Function::Sinh, "sinh"}, {Function::Cosh, "cosh"}, {Function::Tanh, "tanh"},
    {Function::Sin, "sin"},   {Function::Cos, "cos"},   {Function::Tan, "tan"},
    {Function::Exp, "exp"},   {Function::Log, "log"},   {Function::Sqrt, "sqrt"},
};

const std::set<std::string> kOperandStart = {"number", "variable", "function", "'('", "'-'"};

}  // namespace

const char* function_name(Function f) {
  for (const auto& entry : kFunctions)
    if (entry.fn == f) return entry.name;
  return "?";
}

Expression::Expression() {
  static const auto zero = std::make_shared<const Node>();
  node_ = zero;
}

Expression Expression::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Number;
  n->value = v;
  return Expression(n);
}

Expression Expression::variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->var = index;
  return Expression(n);
}

Expression Expression::unary(NodeKind kind, Expression operand) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = operand.node_;
  return Expression(n);
}

Expression Expression::binary(NodeKind kind, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Expression(n);
}

Expression Expression::call(Function f, Expression arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Call;
  n->fn = f;
  n->lhs = arg.node_;
  return Expression(n);
}

NodeKind Expression::kind() const { return node_->kind; }
double Expression::number_value() const { return node_->value; }
int Expression::variable_index() const { return node_->var; }
Function Expression::function() const { return node_->fn; }
Expression Expression::lhs() const { return Expression(node_->lhs); }
Expression Expression::rhs() const { return Expression(node_->rhs); }

bool Expression::is_zero_literal() const { return kind() == NodeKind::Number && number_value() == 0.0; }

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Number: return a.number_value() == b.number_value();
    case NodeKind::Variable: return a.variable_index() == b.variable_index();
    case NodeKind::Neg: return a.lhs() == b.lhs();
    case NodeKind::Call: return a.function() == b.function() && a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

std::string Expression::to_string() const {
  switch (kind()) {
    case NodeKind::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", number_value());
      return buf;
    }
    case NodeKind::Variable: return "x" + std::to_string(variable_index());
    case NodeKind::Neg: return "-(" + lhs().to_string() + ")";
    case NodeKind::Call: return std::string(function_name(function())) + "(" + lhs().to_string() + ")";
    default: break;
  }
  const char* op = "+";
  switch (kind()) {
    case NodeKind::Sub: op = "-"; break;
    case NodeKind::Mul: op = "*"; break;
    case NodeKind::Div: op = "/"; break;
    case NodeKind::Pow: op = "^"; break;
    default: break;
  }
  return "(" + lhs().to_string() + ")" + op + "(" + rhs().to_string() + ")";
}

ParseError::ParseError(std::size_t offset, std::set<std::string> expected, const std::string& found)
    : Error(ErrorKind::ParseError,
            [&] {
              std::ostringstream os;
              os << "at offset " << offset << ": expected ";
              bool first = true;
              for (const auto& e : expected) {
                os << (first ? "" : " or ") << e;
                first = false;
              }
              os << ", found " << found;
              return os.str();
            }()),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse() {
    Expression e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::set<std::string> expected) {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw ParseError(pos_, std::move(expected), found);
  }

  Expression parse_sum() {
    Expression e = parse_product();
    for (;;) {
      if (accept('+'))
        e = Expression::binary(NodeKind::Add, e, parse_product());
      else if (accept('-'))
        e = Expression::binary(NodeKind::Sub, e, parse_product());
      else
        return e;
    }
  }

  Expression parse_product() {
    Expression e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = Expression::binary(NodeKind::Mul, e, parse_unary());
      else if (accept('/'))
        e = Expression::binary(NodeKind::Div, e, parse_unary());
      else
        return e;
    }
  }

  Expression parse_unary() {
    if (accept('-')) return Expression::unary(NodeKind::Neg, parse_unary());
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (accept('^')) return Expression::binary(NodeKind::Pow, base, parse_unary());
    return base;
  }

  Expression parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(kOperandStart);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = parse_sum();
      if (!accept(')')) fail({"')'"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word.size() == 2 && word[0] == 'x' && word[1] >= '0' && word[1] <= '3')
        return Expression::variable(word[1] - '0');
      for (const auto& entry : kFunctions) {
        if (word == entry.name) {
          if (!accept('(')) fail({"'('"});
          Expression arg = parse_sum();
          if (!accept(')')) fail({"')'"});
          return Expression::call(entry.fn, arg);
        }
      }
      pos_ = start;
      fail({"number", "variable x0..x3", "function"});
    }
    fail(kOperandStart);
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number"});
    }
    return Expression::number(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void domain_error(const char* fn, double arg) {
  std::ostringstream os;
  os.precision(17);
  os << fn << " undefined at argument " << arg;
  throw Error(ErrorKind::DomainError, os.str());
}

bool is_constant(const Jet2& j) {
  for (double d : j.d)
    if (d != 0.0) return false;
  for (double h : j.h)
    if (h != 0.0) return false;
  return true;
}

Jet2 eval_node(const Expression& e, const Vec<double, 4>& x) {
  switch (e.kind()) {
    case NodeKind::Number: return Jet2(e.number_value());
    case NodeKind::Variable: return Jet2::variable(x[e.variable_index()], e.variable_index());
    case NodeKind::Neg: return -eval_node(e.lhs(), x);
    case NodeKind::Add: return eval_node(e.lhs(), x) + eval_node(e.rhs(), x);
    case NodeKind::Sub: return eval_node(e.lhs(), x) - eval_node(e.rhs(), x);
    case NodeKind::Mul: return eval_node(e.lhs(), x) * eval_node(e.rhs(), x);
    case NodeKind::Div: {
      Jet2 den = eval_node(e.rhs(), x);
      if (den.v == 0.0) domain_error("division", den.v);
      return eval_node(e.lhs(), x) / den;
    }
    case NodeKind::Pow: {
      Jet2 base = eval_node(e.lhs(), x);
      Jet2 ex = eval_node(e.rhs(), x);
      if (is_constant(ex) && ex.v == std::round(ex.v) && std::abs(ex.v) <= 64) {
        const int n = static_cast<int>(ex.v);
        if (n < 0 && base.v == 0.0) domain_error("pow", base.v);
        return ipow(base, n);
      }
      if (base.v <= 0.0) domain_error("pow", base.v);
      return exp(ex * log(base));
    }
    case NodeKind::Call: {
      Jet2 a = eval_node(e.lhs(), x);
      switch (e.function()) {
        case Function::Sin: return sin(a);
        case Function::Cos: return cos(a);
        case Function::Tan:
          if (std::cos(a.v) == 0.0) domain_error("tan", a.v);
          return tan(a);
        case Function::Exp: return exp(a);
        case Function::Log:
          if (a.v <= 0.0) domain_error("log", a.v);
          return log(a);
        case Function::Sqrt:
          if (a.v <= 0.0) domain_error("sqrt", a.v);
          return sqrt(a);
        case Function::Sinh: return sinh(a);
        case Function::Cosh: return cosh(a);
        case Function::Tanh: return tanh(a);
      }
    }
  }
  return Jet2(0.0);
}

}  // namespace

Expression parse_expression(std::string_view text) { return Parser(text).parse(); }

Jet2 eval_jet(const Expression& e, const Vec<double, 4>& x) {
  Jet2 r = eval_node(e, x);
  if (!std::isfinite(r.v)) domain_error("expression", r.v);
  return r;
}

}  // namespace cliffcheck
