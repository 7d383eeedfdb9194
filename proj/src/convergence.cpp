#include <algorithm>
#include <cmath>
#include <numeric>

#include "aim/analysis.hpp"

namespace aim {

std::string to_string(ConvergenceReport::Verdict v) {
  switch (v) {
    case ConvergenceReport::Verdict::Converges:
      return "Converges";
    case ConvergenceReport::Verdict::Diverges:
      return "Diverges";
    case ConvergenceReport::Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

ConvergenceReport stern_seidel(const std::vector<double>& pvals, double threshold, int window) {
  if (pvals.empty()) {
    throw Error(ErrorCode::InsufficientData, "no partial denominators supplied");
  }
  if (window < 1) {
    throw Error(ErrorCode::InvalidArgument, "window must be positive");
  }
  for (std::size_t n = 0; n < pvals.size(); ++n) {
    if (!(pvals[n] > 0.0)) {
      throw Error(ErrorCode::NonPositiveP, "p_" + std::to_string(n) + " = " + std::to_string(pvals[n]));
    }
  }
  ConvergenceReport r;
  r.mu = std::min(1.0, pvals.front());
  r.partial_sum = std::accumulate(pvals.begin(), pvals.end(), 0.0);
  r.product_bound = r.mu * r.mu * r.partial_sum;

  const auto w = static_cast<std::size_t>(window);
  double recent = 0.0;
  if (pvals.size() >= w) {
    recent = std::accumulate(pvals.end() - static_cast<std::ptrdiff_t>(w), pvals.end(), 0.0);
  }
  if (r.partial_sum > threshold) {
    r.verdict = ConvergenceReport::Verdict::Converges;
  } else if (pvals.size() >= w && recent < kCauchyIncrement) {
    r.verdict = ConvergenceReport::Verdict::Diverges;
    r.exp_bound = std::exp(2.0 * r.partial_sum);
  }
  return r;
}

namespace {

void require_unit_numerators(const CFState& state) {
  for (std::size_t n = 0; n < state.qvals.size(); ++n) {
    if (state.qvals[n] != 1.0) {
      throw Error(ErrorCode::HypothesisViolated,
                  "q_" + std::to_string(n) + " != 1; apply the unit-numerator transform first");
    }
  }
}

}  // namespace

std::vector<BoundRow> bound_check(const CFState& state) {
  for (std::size_t n = 0; n < state.pvals.size(); ++n) {
    if (state.pvals[n] < 1.0) {
      throw Error(ErrorCode::HypothesisViolated, "p_" + std::to_string(n) + " = " + std::to_string(state.pvals[n]) +
                                                     " < 1");
    }
  }
  require_unit_numerators(state);
  const double mu = std::min(1.0, state.pvals.front());
  std::vector<BoundRow> rows;
  double prev = 0.0;
  for (int n = 0; n <= state.depth(); ++n) {
    const double cur = state.approximant(n).value_or(prev);
    const double lhs = std::abs(cur - prev);
    const double rhs = 1.0 / ((n + 1) * mu * mu);
    rows.push_back({n, lhs, rhs, lhs <= rhs * (1.0 + kBoundRoundingSlack)});
    prev = cur;
  }
  return rows;
}

std::vector<BoundRow> denominator_bound_check(const CFState& state) {
  for (std::size_t n = 0; n < state.pvals.size(); ++n) {
    if (!(state.pvals[n] > 0.0)) {
      throw Error(ErrorCode::NonPositiveP, "p_" + std::to_string(n) + " = " + std::to_string(state.pvals[n]));
    }
  }
  require_unit_numerators(state);
  const double mu = std::min(1.0, state.pvals.front());
  std::vector<BoundRow> rows;
  double sum = 0.0;
  for (int n = 0; n <= state.depth(); ++n) {
    sum += state.pvals[static_cast<std::size_t>(n)];
    const double lhs = state.denominator(n - 1) * state.denominator(n);
    const double rhs = mu * mu * sum;
    rows.push_back({n, lhs, rhs, lhs >= rhs * (1.0 - kBoundRoundingSlack)});
  }
  return rows;
}

}  // namespace aim
