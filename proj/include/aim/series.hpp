#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aim/errors.hpp"

namespace aim {

/// Pivot magnitude below which series division is refused.
inline constexpr double kPivotEpsilon = 1e-300;

/// Relative pivot size (against the numerator norm) that triggers a conditioning warning.
inline constexpr double kConditioningRatio = 1e-12;

/// Truncated power series sum_k c_k (x - x0)^k with coefficients up to a fixed order.
///
/// Binary arithmetic truncates to the smaller order of its operands; unknown
/// coefficients are never padded with zeros. All coefficients are finite.
class TaylorSeries {
 public:
  TaylorSeries(double center, std::vector<double> coeffs);

  [[nodiscard]] static TaylorSeries constant(double center, double value, int order);
  /// The identity function x, expanded at `center`.
  [[nodiscard]] static TaylorSeries variable(double center, int order);
  [[nodiscard]] static TaylorSeries zero(double center, int order);

  [[nodiscard]] double center() const noexcept { return center_; }
  [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] double operator[](std::size_t k) const { return coeffs_.at(k); }

  /// Value at the expansion point.
  [[nodiscard]] double value() const noexcept { return coeffs_.front(); }
  /// Horner evaluation of the truncated polynomial at x.
  [[nodiscard]] double evaluate(double x) const noexcept;
  /// Largest coefficient magnitude.
  [[nodiscard]] double max_abs() const noexcept;

  [[nodiscard]] TaylorSeries truncated(int order) const;

  TaylorSeries operator-() const;

 private:
  double center_;
  std::vector<double> coeffs_;
};

TaylorSeries operator+(const TaylorSeries& a, const TaylorSeries& b);
TaylorSeries operator-(const TaylorSeries& a, const TaylorSeries& b);
/// Cauchy product truncated to the smaller order.
TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b);
TaylorSeries operator*(double s, const TaylorSeries& a);
TaylorSeries operator+(const TaylorSeries& a, double s);
TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b);

/// Series quotient a / b. Throws SingularPivot when |b(x0)| < kPivotEpsilon and
/// reports a conditioning warning when |b(x0)| < kConditioningRatio * max|a_k|.
TaylorSeries divide(const TaylorSeries& a, const TaylorSeries& b, Warnings* warnings = nullptr);

/// Term-wise derivative; the order drops by one. Throws OrderExhausted at order 0.
TaylorSeries derivative(const TaylorSeries& a);

/// Term-wise antiderivative with the given value at the center; the order grows by one.
TaylorSeries antiderivative(const TaylorSeries& a, double constant = 0.0);

/// exp(a) via e' = a' e. Throws Overflow if exp(a(x0)) is not representable.
TaylorSeries exp(const TaylorSeries& a);

/// Integer power by repeated squaring; pow(a, 0) is the unit series.
TaylorSeries pow(const TaylorSeries& a, unsigned k);

}  // namespace aim
