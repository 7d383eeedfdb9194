#include <algorithm>
#include <cmath>
#include <sstream>

#include "aim/analysis.hpp"

namespace aim {

namespace {

constexpr double kRescaleThreshold = 1e150;

void check_lengths(const std::vector<double>& pvals, const std::vector<double>& qvals) {
  if (pvals.size() != qvals.size()) {
    throw Error(ErrorCode::InvalidArgument, "p and q sequences differ in length");
  }
}

}  // namespace

double backward_ratio(const std::vector<double>& pvals, const std::vector<double>& qvals, int N) {
  check_lengths(pvals, qvals);
  if (N < 1 || static_cast<std::size_t>(N) >= pvals.size()) {
    throw Error(ErrorCode::InvalidArgument, "backward start depth " + std::to_string(N) + " outside 1.." +
                                                std::to_string(static_cast<long>(pvals.size()) - 1));
  }
  double hi = 0.0;  // x_n
  double lo = 1.0;  // x_{n-1}
  for (int n = N; n >= 0; --n) {
    const double qn = qvals[static_cast<std::size_t>(n)];
    if (qn == 0.0) {
      throw Error(ErrorCode::ZeroQ, "q_" + std::to_string(n) + " = 0");
    }
    const double next = (hi - pvals[static_cast<std::size_t>(n)] * lo) / qn;
    hi = lo;
    lo = next;
    const double mag = std::max(std::abs(hi), std::abs(lo));
    if (mag > kRescaleThreshold) {
      hi /= mag;
      lo /= mag;
    }
    if (!std::isfinite(hi) || !std::isfinite(lo)) {
      throw Error(ErrorCode::Overflow, "backward recurrence overflowed at level " + std::to_string(n));
    }
  }
  if (lo == 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "backward solution vanishes at index -2");
  }
  return hi / lo;
}

std::vector<int> default_depth_schedule(std::size_t len) {
  std::vector<int> out;
  if (len < 2) {
    return out;
  }
  const int last = static_cast<int>(len) - 1;
  for (int n = 16; n < last; n *= 2) {
    out.push_back(n);
  }
  out.push_back(last);
  return out;
}

double miller_minimal_ratio(const std::vector<double>& pvals, const std::vector<double>& qvals,
                            std::vector<int> depth_schedule) {
  check_lengths(pvals, qvals);
  if (depth_schedule.empty()) {
    depth_schedule = default_depth_schedule(pvals.size());
  }
  if (depth_schedule.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "backward recurrence needs at least two start depths");
  }
  const int deepest = *std::max_element(depth_schedule.begin(), depth_schedule.end());
  for (int n = 0; n <= deepest && static_cast<std::size_t>(n) < qvals.size(); ++n) {
    if (qvals[static_cast<std::size_t>(n)] == 0.0) {
      throw Error(ErrorCode::ZeroQ, "q_" + std::to_string(n) + " = 0");
    }
  }
  double prev = backward_ratio(pvals, qvals, depth_schedule.front());
  for (std::size_t i = 1; i < depth_schedule.size(); ++i) {
    const double cur = backward_ratio(pvals, qvals, depth_schedule[i]);
    if (std::abs(cur - prev) <= kMillerAgreement * std::max(std::abs(cur), std::abs(prev))) {
      return cur;
    }
    prev = cur;
  }
  std::ostringstream os;
  os << "backward estimates did not agree within " << kMillerAgreement << " up to depth " << depth_schedule.back()
     << " (last estimate " << prev << ")";
  throw Error(ErrorCode::NoConvergence, os.str());
}

PincherleResult pincherle_check(const std::vector<double>& pvals, const std::vector<double>& qvals, Warnings* warnings,
                                std::vector<int> depth_schedule) {
  check_lengths(pvals, qvals);
  if (pvals.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "need at least two levels");
  }
  const int N = static_cast<int>(pvals.size()) - 1;
  const CFState st = cf_approximants(pvals, qvals, N);
  const auto last = st.approximant(N);
  const auto before = st.approximant(N - 1);
  if (!last) {
    throw Error(ErrorCode::ZeroDenominator, "B_" + std::to_string(N) + " = 0");
  }
  PincherleResult r;
  r.cf_limit = *last;
  if (before && std::abs(*last - *before) > 1e-10 * std::max(1.0, std::abs(*last))) {
    std::ostringstream os;
    os << "approximants not settled at depth " << N << ": |C_N - C_{N-1}| = " << std::abs(*last - *before);
    warn(warnings, os.str());
  }
  r.backward_ratio = miller_minimal_ratio(pvals, qvals, std::move(depth_schedule));
  const double minus = std::abs(r.cf_limit + r.backward_ratio);
  const double plus = std::abs(r.cf_limit - r.backward_ratio);
  r.relation_sign = plus < minus ? 1 : -1;
  r.agreement = std::min(plus, minus);
  return r;
}

}  // namespace aim
