#include "aim/expression.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace aim {

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_leaf(Expression::Kind kind, double value = 0.0) {
  return std::make_shared<const Expression::Node>(Expression::Node{kind, value, 0, nullptr, nullptr});
}

NodePtr make_unary(Expression::Kind kind, NodePtr operand, unsigned exponent = 0) {
  return std::make_shared<const Expression::Node>(
      Expression::Node{kind, 0.0, exponent, std::move(operand), nullptr});
}

NodePtr make_binary(Expression::Kind kind, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Expression::Node>(
      Expression::Node{kind, 0.0, 0, std::move(lhs), std::move(rhs)});
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Recursive descent:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer)*
//   primary := number | identifier | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, const std::string& param) : text_(text), param_(param) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_space();
    if (pos_ < text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "column " + std::to_string(pos_ + 1) + ": " + what + " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Expression::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Expression::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Expression::Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Expression::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      return make_unary(Expression::Kind::Neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) {
        ++pos_;
      }
      if (start == pos_ || (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' ||
                                                      text_[pos_] == 'E'))) {
        pos_ = start;
        fail("exponent of '^' must be a non-negative integer literal");
      }
      unsigned k = 0;
      const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
      if (ec != std::errc{} || k > 4096) {
        pos_ = start;
        fail("exponent out of range");
      }
      base = make_unary(Expression::Kind::IntPow, base, k);
    }
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) {
      fail("unexpected end of expression");
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) {
        fail("expected ')'");
      }
      return inner;
    }
    if (is_digit(c) || c == '.') {
      return number();
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") {
        return make_leaf(Expression::Kind::VarX);
      }
      if (name == param_) {
        return make_leaf(Expression::Kind::Param);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) {
        ++pos_;
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
        ++look;
      }
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
          ++pos_;
        }
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make_leaf(Expression::Kind::Const, value);
  }

  std::string_view text_;
  const std::string& param_;
  std::size_t pos_ = 0;
};

double eval_scalar(const Expression::Node& n, double x, double param) {
  using K = Expression::Kind;
  switch (n.kind) {
    case K::Const: return n.value;
    case K::VarX: return x;
    case K::Param: return param;
    case K::Neg: return -eval_scalar(*n.lhs, x, param);
    case K::Add: return eval_scalar(*n.lhs, x, param) + eval_scalar(*n.rhs, x, param);
    case K::Sub: return eval_scalar(*n.lhs, x, param) - eval_scalar(*n.rhs, x, param);
    case K::Mul: return eval_scalar(*n.lhs, x, param) * eval_scalar(*n.rhs, x, param);
    case K::Div: {
      const double den = eval_scalar(*n.rhs, x, param);
      if (den == 0.0) {
        throw Error(ErrorCode::EvalError, "division by zero");
      }
      return eval_scalar(*n.lhs, x, param) / den;
    }
    case K::IntPow: {
      const double b = eval_scalar(*n.lhs, x, param);
      double r = 1.0;
      for (unsigned i = 0; i < n.exponent; ++i) {
        r *= b;
      }
      return r;
    }
  }
  throw Error(ErrorCode::EvalError, "corrupt expression node");
}

TaylorSeries eval_series(const Expression::Node& n, double param, double center, int order,
                         Warnings* warnings) {
  using K = Expression::Kind;
  switch (n.kind) {
    case K::Const: return TaylorSeries::constant(center, n.value, order);
    case K::VarX: return TaylorSeries::variable(center, order);
    case K::Param: return TaylorSeries::constant(center, param, order);
    case K::Neg: return -eval_series(*n.lhs, param, center, order, warnings);
    case K::Add:
      return eval_series(*n.lhs, param, center, order, warnings) +
             eval_series(*n.rhs, param, center, order, warnings);
    case K::Sub:
      return eval_series(*n.lhs, param, center, order, warnings) -
             eval_series(*n.rhs, param, center, order, warnings);
    case K::Mul:
      return eval_series(*n.lhs, param, center, order, warnings) *
             eval_series(*n.rhs, param, center, order, warnings);
    case K::Div:
      return divide(eval_series(*n.lhs, param, center, order, warnings),
                    eval_series(*n.rhs, param, center, order, warnings), warnings);
    case K::IntPow: return pow(eval_series(*n.lhs, param, center, order, warnings), n.exponent);
  }
  throw Error(ErrorCode::EvalError, "corrupt expression node");
}

}  // namespace

Expression Expression::parse(std::string_view text, std::string param_name) {
  if (param_name.empty() || param_name == "x" || !is_ident_start(param_name.front())) {
    throw Error(ErrorCode::InvalidSpec, "invalid parameter name '" + param_name + "'");
  }
  Parser parser(text, param_name);
  NodePtr root = parser.parse();
  return Expression(std::move(root), std::move(param_name), std::string(text));
}

Expression::Expression(std::shared_ptr<const Node> root, std::string param_name, std::string source)
    : root_(std::move(root)), param_name_(std::move(param_name)), source_(std::move(source)) {
  if (!root_) {
    throw Error(ErrorCode::InvalidArgument, "empty expression");
  }
}

double Expression::evaluate(double x, double param) const { return eval_scalar(*root_, x, param); }

TaylorSeries Expression::to_series(double param, double center, int order, Warnings* warnings) const {
  if (order < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative series order");
  }
  return eval_series(*root_, param, center, order, warnings);
}

}  // namespace aim
