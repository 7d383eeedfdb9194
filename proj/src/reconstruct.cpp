#include "aim/reconstruct.hpp"

#include <sstream>

namespace aim {

namespace {

void require_center(const TaylorSeries& s, const ProblemSpec& spec) {
  if (s.center() != spec.x0()) {
    std::ostringstream os;
    os << "series centered at " << s.center() << ", problem at " << spec.x0();
    throw Error(ErrorCode::CenterMismatch, os.str());
  }
}

void require_order(const TaylorSeries& s, int needed, const char* what) {
  if (s.order() < needed) {
    throw Error(ErrorCode::OrderExhausted, std::string(what) + " needs order >= " + std::to_string(needed) +
                                               ", got " + std::to_string(s.order()));
  }
}

}  // namespace

const char* to_string(AlphaSeries::Source source) noexcept {
  switch (source) {
    case AlphaSeries::Source::TerminatedCF:
      return "TerminatedCF";
    case AlphaSeries::Source::ApproximantDepthN:
      return "ApproximantDepthN";
    case AlphaSeries::Source::External:
      return "External";
  }
  return "External";
}

AlphaSeries alpha_from_ladder(const PQSequences& pq) {
  const std::optional<int> term = detect_termination(pq);
  const int level = term ? *term - 1 : pq.depth();
  const double c = pq.x0;
  const int order = pq.q.front().order();
  TaylorSeries a_older = TaylorSeries::constant(c, 1.0, order);
  TaylorSeries a_old = TaylorSeries::zero(c, order);
  TaylorSeries b_older = TaylorSeries::zero(c, order);
  TaylorSeries b_old = TaylorSeries::constant(c, 1.0, order);
  for (int n = 0; n <= level; ++n) {
    const auto& p = pq.p[static_cast<std::size_t>(n)];
    const auto& q = pq.q[static_cast<std::size_t>(n)];
    TaylorSeries a_new = p * a_old + q * a_older;
    TaylorSeries b_new = p * b_old + q * b_older;
    a_older = std::move(a_old);
    a_old = std::move(a_new);
    b_older = std::move(b_old);
    b_old = std::move(b_new);
  }
  AlphaSeries out{divide(a_old, b_old), term ? AlphaSeries::Source::TerminatedCF : AlphaSeries::Source::ApproximantDepthN,
                  level};
  return out;
}

TaylorSeries riccati_residual(const AlphaSeries& alpha, const ProblemSpec& spec, double E) {
  const TaylorSeries& a = alpha.series;
  require_center(a, spec);
  require_order(a, 1, "Riccati residual");
  const TaylorSeries l0 = spec.lambda0_series(E);
  const TaylorSeries s0 = spec.s0_series(E);
  return derivative(a) - a * a - l0 * a + s0;
}

TaylorSeries factorization_residual(const AlphaSeries& alpha, const ProblemSpec& spec, double E) {
  const TaylorSeries& a = alpha.series;
  require_center(a, spec);
  require_order(a, 1, "factorization residual");
  const TaylorSeries l0 = spec.lambda0_series(E);
  const TaylorSeries s0 = spec.s0_series(E);
  // L - (d/dx + beta)(d/dx + alpha) leaves only a zeroth-order term; the right
  // factor annihilates exp(-int alpha), the solution built below.
  const TaylorSeries beta = -l0 - a;
  return -(derivative(a) + a * beta + s0);
}

TaylorSeries build_solution(const AlphaSeries& alpha, const ProblemSpec& spec, double E, double C1, double C2) {
  const TaylorSeries& a = alpha.series;
  require_center(a, spec);
  require_order(a, 4, "solution reconstruction");
  const TaylorSeries l0 = spec.lambda0_series(E);
  const TaylorSeries outer = exp(-antiderivative(a));
  // y1 = exp(-int alpha) and the Wronskian exp(int lambda0) give the second
  // solution y1 int W / y1^2, hence the 2 alpha.
  const TaylorSeries inner = antiderivative(exp(antiderivative(l0 + 2.0 * a)));
  return outer * (C1 * inner + C2);
}

TaylorSeries ode_residual(const TaylorSeries& y, const ProblemSpec& spec, double E) {
  require_center(y, spec);
  require_order(y, 2, "ODE residual");
  const TaylorSeries l0 = spec.lambda0_series(E);
  const TaylorSeries s0 = spec.s0_series(E);
  const TaylorSeries dy = derivative(y);
  return derivative(dy) - l0 * dy - s0 * y;
}

}  // namespace aim
