#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "aim/series.hpp"

namespace aim {

/// Rational expression in the variable `x` and one named parameter.
///
/// Grammar: decimal numbers with optional exponent, the identifiers `x` and
/// the declared parameter, `+ - * / ^`, parentheses and unary minus. The
/// exponent of `^` must be a non-negative integer literal.
class Expression {
 public:
  enum class Kind { Const, VarX, Param, Neg, Add, Sub, Mul, Div, IntPow };

  struct Node {
    Kind kind;
    double value = 0.0;    // Const
    unsigned exponent = 0; // IntPow
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  /// Throws ParseError with a column-annotated message on malformed input.
  [[nodiscard]] static Expression parse(std::string_view text, std::string param_name);

  Expression(std::shared_ptr<const Node> root, std::string param_name, std::string source = {});

  [[nodiscard]] const std::string& param_name() const noexcept { return param_name_; }
  [[nodiscard]] const std::string& source() const noexcept { return source_; }
  [[nodiscard]] const Node& root() const noexcept { return *root_; }

  /// Scalar evaluation; throws EvalError on division by zero.
  [[nodiscard]] double evaluate(double x, double param) const;

  /// Taylor expansion at `center` to `order` with the parameter substituted.
  /// Throws SingularPivot when a denominator vanishes at the center.
  [[nodiscard]] TaylorSeries to_series(double param, double center, int order,
                                       Warnings* warnings = nullptr) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string param_name_;
  std::string source_;
};

}  // namespace aim
