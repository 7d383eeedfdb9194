#pragma once

#include <cmath>

namespace aim::detail {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, built from error-free
// transformations. Carries about 32 significant digits.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  [[nodiscard]] double value() const noexcept { return hi + lo; }
};

[[nodiscard]] inline DoubleDouble two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

[[nodiscard]] inline DoubleDouble quick_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

[[nodiscard]] inline DoubleDouble two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

[[nodiscard]] inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) noexcept {
  DoubleDouble s = two_sum(a.hi, b.hi);
  const DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

[[nodiscard]] inline DoubleDouble operator-(DoubleDouble a) noexcept { return {-a.hi, -a.lo}; }

[[nodiscard]] inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) noexcept { return a + (-b); }

[[nodiscard]] inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) noexcept {
  DoubleDouble p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

[[nodiscard]] inline DoubleDouble operator*(double a, DoubleDouble b) noexcept {
  DoubleDouble p = two_prod(a, b.hi);
  p.lo += a * b.lo;
  return quick_two_sum(p.hi, p.lo);
}

}  // namespace aim::detail
