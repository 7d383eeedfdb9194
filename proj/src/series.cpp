#include "aim/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CenterMismatch: return "CenterMismatch";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::OrderExhausted: return "OrderExhausted";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::ZeroPartialNumerator: return "ZeroPartialNumerator";
    case ErrorCode::NonPositiveP: return "NonPositiveP";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroQ: return "ZeroQ";
    case ErrorCode::ZeroP: return "ZeroP";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroB0: return "ZeroB0";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
  }
  return "Unknown";
}

namespace {

void require_same_center(const TaylorSeries& a, const TaylorSeries& b) {
  if (a.center() != b.center()) {
    std::ostringstream os;
    os << "series centered at " << a.center() << " and " << b.center();
    throw Error(ErrorCode::CenterMismatch, os.str());
  }
}

std::size_t common_length(const TaylorSeries& a, const TaylorSeries& b) {
  return static_cast<std::size_t>(std::min(a.order(), b.order())) + 1;
}

}  // namespace

TaylorSeries::TaylorSeries(double center, std::vector<double> coeffs)
    : center_(center), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a series needs at least one coefficient");
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (!std::isfinite(coeffs_[k])) {
      throw Error(ErrorCode::Overflow, "non-finite coefficient at index " + std::to_string(k));
    }
  }
}

TaylorSeries TaylorSeries::constant(double center, double value, int order) {
  std::vector<double> c(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
  c[0] = value;
  return TaylorSeries(center, std::move(c));
}

TaylorSeries TaylorSeries::variable(double center, int order) {
  std::vector<double> c(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
  c[0] = center;
  if (order >= 1) {
    c[1] = 1.0;
  }
  return TaylorSeries(center, std::move(c));
}

TaylorSeries TaylorSeries::zero(double center, int order) { return constant(center, 0.0, order); }

double TaylorSeries::evaluate(double x) const noexcept {
  const double h = x - center_;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * h + *it;
  }
  return acc;
}

double TaylorSeries::max_abs() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) {
    m = std::max(m, std::abs(c));
  }
  return m;
}

TaylorSeries TaylorSeries::truncated(int order) const {
  if (order < 0 || order > this->order()) {
    throw Error(ErrorCode::OrderExhausted, "cannot truncate order " + std::to_string(this->order()) +
                                               " series to order " + std::to_string(order));
  }
  return TaylorSeries(center_, std::vector<double>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

TaylorSeries TaylorSeries::operator-() const {
  std::vector<double> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](double v) { return -v; });
  return TaylorSeries(center_, std::move(c));
}

TaylorSeries operator+(const TaylorSeries& a, const TaylorSeries& b) {
  require_same_center(a, b);
  const std::size_t n = common_length(a, b);
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = a.coeffs()[k] + b.coeffs()[k];
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries operator-(const TaylorSeries& a, const TaylorSeries& b) {
  require_same_center(a, b);
  const std::size_t n = common_length(a, b);
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = a.coeffs()[k] - b.coeffs()[k];
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
  require_same_center(a, b);
  const std::size_t n = common_length(a, b);
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      acc += ac[j] * bc[k - j];
    }
    c[k] = acc;
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries operator*(double s, const TaylorSeries& a) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (double& v : c) {
    v *= s;
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries operator+(const TaylorSeries& a, double s) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  c[0] += s;
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b) { return divide(a, b); }

TaylorSeries divide(const TaylorSeries& a, const TaylorSeries& b, Warnings* warnings) {
  require_same_center(a, b);
  const double pivot = b.value();
  if (std::abs(pivot) < kPivotEpsilon) {
    std::ostringstream os;
    os << "divisor vanishes at x0 = " << b.center() << " (|b0| = " << std::abs(pivot) << ")";
    throw Error(ErrorCode::SingularPivot, os.str());
  }
  if (std::abs(pivot) < kConditioningRatio * a.max_abs()) {
    std::ostringstream os;
    os << "ill-conditioned series division at x0 = " << b.center() << ": |b0| = " << std::abs(pivot)
       << " against numerator scale " << a.max_abs();
    warn(warnings, os.str());
  }
  const std::size_t n = common_length(a, b);
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = ac[k];
    for (std::size_t j = 1; j <= k; ++j) {
      acc -= bc[j] * c[k - j];
    }
    c[k] = acc / pivot;
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries derivative(const TaylorSeries& a) {
  if (a.order() == 0) {
    throw Error(ErrorCode::OrderExhausted, "cannot differentiate an order-0 series");
  }
  const auto ac = a.coeffs();
  std::vector<double> c(ac.size() - 1);
  for (std::size_t k = 0; k + 1 < ac.size(); ++k) {
    c[k] = static_cast<double>(k + 1) * ac[k + 1];
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries antiderivative(const TaylorSeries& a, double constant) {
  const auto ac = a.coeffs();
  std::vector<double> c(ac.size() + 1);
  c[0] = constant;
  for (std::size_t k = 0; k < ac.size(); ++k) {
    c[k + 1] = ac[k] / static_cast<double>(k + 1);
  }
  return TaylorSeries(a.center(), std::move(c));
}

TaylorSeries exp(const TaylorSeries& a) {
  const auto ac = a.coeffs();
  const double e0 = std::exp(ac[0]);
  if (!std::isfinite(e0)) {
    throw Error(ErrorCode::Overflow, "exp of constant term " + std::to_string(ac[0]));
  }
  std::vector<double> e(ac.size(), 0.0);
  e[0] = e0;
  // k e_k = sum_{j=1}^{k} j a_j e_{k-j}
  for (std::size_t k = 1; k < ac.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      acc += static_cast<double>(j) * ac[j] * e[k - j];
    }
    e[k] = acc / static_cast<double>(k);
  }
  return TaylorSeries(a.center(), std::move(e));
}

TaylorSeries pow(const TaylorSeries& a, unsigned k) {
  TaylorSeries result = TaylorSeries::constant(a.center(), 1.0, a.order());
  TaylorSeries base = a;
  while (k > 0) {
    if (k & 1U) {
      result = result * base;
    }
    k >>= 1U;
    if (k > 0) {
      base = base * base;
    }
  }
  return result;
}

}  // namespace aim
