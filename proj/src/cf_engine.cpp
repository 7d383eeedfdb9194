#include "aim/cf_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aim/double_double.hpp"

namespace aim {

namespace {

bool is_identically_zero(const TaylorSeries& s, double scale, double tol) {
  const double threshold = tol * scale;
  for (double c : s.coeffs()) {
    if (std::abs(c) > threshold) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<double> PQSequences::pvals() const {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& s : p) {
    out.push_back(s.value());
  }
  return out;
}

std::vector<double> PQSequences::qvals() const {
  std::vector<double> out;
  out.reserve(q.size());
  for (const auto& s : q) {
    out.push_back(s.value());
  }
  return out;
}

PQSequences pq_iterate(const ProblemSpec& spec, double param) { return pq_iterate(spec, param, spec.n_max()); }

PQSequences pq_iterate(const ProblemSpec& spec, double param, int depth) {
  if (depth < 0 || depth > spec.order()) {
    throw Error(ErrorCode::OrderExhausted, "depth " + std::to_string(depth) + " exceeds series order " +
                                               std::to_string(spec.order()));
  }
  PQSequences out;
  out.x0 = spec.x0();
  out.p.push_back(spec.lambda0_series(param, &out.warnings));
  out.q.push_back(spec.s0_series(param, &out.warnings));
  out.scale = std::max(out.p.front().max_abs(), out.q.front().max_abs());

  for (int n = 1; n <= depth; ++n) {
    const TaylorSeries& qp = out.q.back();
    const TaylorSeries& pp = out.p.back();
    if (is_identically_zero(qp, out.scale, kTerminationTolerance)) {
      out.stop = PQStop{n - 1, PQStop::Kind::ExactZero};
      return out;
    }
    if (std::abs(qp.value()) < kPivotEpsilon) {
      out.stop = PQStop{n - 1, PQStop::Kind::SmallPivot};
      std::ostringstream os;
      os << "q_" << n - 1 << " vanishes at x0 = " << spec.x0()
         << " without vanishing identically; ladder stopped at level " << n - 1;
      out.warnings.push_back(os.str());
      return out;
    }
    const TaylorSeries log_deriv = divide(derivative(qp), qp, &out.warnings);
    TaylorSeries pn = pp + log_deriv;
    TaylorSeries qn = qp + derivative(pp) - pp * log_deriv;
    out.scale = std::max({out.scale, pn.max_abs(), qn.max_abs()});
    out.p.push_back(std::move(pn));
    out.q.push_back(std::move(qn));
  }
  if (is_identically_zero(out.q.back(), out.scale, kTerminationTolerance)) {
    out.stop = PQStop{out.depth(), PQStop::Kind::ExactZero};
  }
  return out;
}

std::optional<double> CFState::last_approximant() const {
  for (auto it = C.rbegin(); it != C.rend(); ++it) {
    if (*it) {
      return *it;
    }
  }
  return std::nullopt;
}

CFState cf_approximants(const std::vector<double>& pvals, const std::vector<double>& qvals, int N, double x) {
  if (N < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative approximant level");
  }
  const auto need = static_cast<std::size_t>(N) + 1;
  if (pvals.size() < need || qvals.size() < need) {
    throw Error(ErrorCode::InvalidArgument, "level " + std::to_string(N) + " needs " + std::to_string(need) +
                                                " partial numerators and denominators");
  }
  using detail::DoubleDouble;
  CFState st;
  st.x = x;
  st.pvals.assign(pvals.begin(), pvals.begin() + static_cast<std::ptrdiff_t>(need));
  st.qvals.assign(qvals.begin(), qvals.begin() + static_cast<std::ptrdiff_t>(need));

  std::vector<DoubleDouble> a{{1.0, 0.0}, {0.0, 0.0}};
  std::vector<DoubleDouble> b{{0.0, 0.0}, {1.0, 0.0}};
  a.reserve(need + 2);
  b.reserve(need + 2);
  for (std::size_t n = 0; n < need; ++n) {
    const std::size_t i = n + 2;
    a.push_back(st.pvals[n] * a[i - 1] + st.qvals[n] * a[i - 2]);
    b.push_back(st.pvals[n] * b[i - 1] + st.qvals[n] * b[i - 2]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    st.A.push_back(a[i].hi);
    st.A_lo.push_back(a[i].lo);
    st.B.push_back(b[i].hi);
    st.B_lo.push_back(b[i].lo);
  }
  // Approximants come from a copy rescaled by powers of two, so they stay finite
  // after A_n and B_n themselves overflow.
  DoubleDouble sa_older{1.0, 0.0}, sa_old{0.0, 0.0}, sb_older{0.0, 0.0}, sb_old{1.0, 0.0};
  auto scale = [](DoubleDouble& v, int e) {
    v.hi = std::ldexp(v.hi, e);
    v.lo = std::ldexp(v.lo, e);
  };
  for (std::size_t n = 0; n < need; ++n) {
    const DoubleDouble sa = st.pvals[n] * sa_old + st.qvals[n] * sa_older;
    const DoubleDouble sb = st.pvals[n] * sb_old + st.qvals[n] * sb_older;
    sa_older = sa_old;
    sa_old = sa;
    sb_older = sb_old;
    sb_old = sb;
    if (sb.hi == 0.0 || !std::isfinite(sb.hi) || !std::isfinite(sa.hi)) {
      st.C.emplace_back(std::nullopt);
    } else {
      st.C.emplace_back(sa.value() / sb.value());
    }
    const double mag = std::max({std::abs(sa_old.hi), std::abs(sb_old.hi), std::abs(sa_older.hi),
                                 std::abs(sb_older.hi)});
    if (mag > 0.0 && std::isfinite(mag)) {
      const int e = std::ilogb(mag);
      if (e > 500 || e < -500) {
        for (DoubleDouble* v : {&sa_old, &sa_older, &sb_old, &sb_older}) {
          scale(*v, -e);
        }
      }
    }
  }
  // v_n for n = -1..N
  for (std::size_t i = 1; i < a.size(); ++i) {
    st.v.push_back((a[i] * b[i - 1] - a[i - 1] * b[i]).value());
  }
  return st;
}

CFState cf_state(const PQSequences& pq) { return cf_approximants(pq.pvals(), pq.qvals(), pq.depth(), pq.x0); }

DeterminantCheck cf_determinants(const CFState& state) {
  DeterminantCheck out;
  out.v = state.v;
  out.product.reserve(state.v.size());
  double prod = -1.0;
  out.product.push_back(prod);
  for (int n = 0; n <= state.depth(); ++n) {
    prod = -state.qvals[static_cast<std::size_t>(n)] * prod;
    out.product.push_back(prod);
  }
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    const double expected = out.product[i];
    double err = 0.0;
    if (expected != 0.0) {
      err = std::abs(out.v[i] - expected) / std::abs(expected);
    } else if (i > 0) {
      const double scale = std::abs(state.A[i + 1] * state.B[i]) + std::abs(state.A[i] * state.B[i + 1]);
      err = scale == 0.0 ? std::abs(out.v[i]) : std::abs(out.v[i]) / scale;
    }
    out.max_rel_error = std::max(out.max_rel_error, err);
  }
  return out;
}

std::vector<double> alpha_partial_sums(const CFState& state) {
  std::vector<double> sums;
  double sum = 0.0;
  double numerator = 1.0;
  for (int k = 0; k <= state.depth(); ++k) {
    numerator *= -state.qvals[static_cast<std::size_t>(k)];
    const double den = state.denominator(k) * state.denominator(k - 1);
    if (den == 0.0) {
      throw Error(ErrorCode::ZeroDenominator, "B_" + std::to_string(k) + " B_" + std::to_string(k - 1) + " = 0");
    }
    // numerator carries (-1)^{k+1} q_0..q_k
    sum -= numerator / den;
    sums.push_back(sum);
  }
  return sums;
}

UnitForm cf_equiv_unit(const std::vector<double>& pvals, const std::vector<double>& qvals) {
  if (pvals.size() != qvals.size() || pvals.empty()) {
    throw Error(ErrorCode::InvalidArgument, "p and q sequences must be non-empty and of equal length");
  }
  for (std::size_t n = 0; n < qvals.size(); ++n) {
    if (qvals[n] == 0.0) {
      throw Error(ErrorCode::ZeroPartialNumerator, "q_" + std::to_string(n) + " = 0");
    }
  }
  UnitForm out;
  out.prefactor = qvals[0];
  out.p_tilde.reserve(pvals.size());
  // Scale factors c_0 = 1, c_n = 1 / (q_n c_{n-1}) turn every numerator past the first into 1.
  double c = 1.0;
  out.p_tilde.push_back(pvals[0]);
  for (std::size_t n = 1; n < pvals.size(); ++n) {
    c = 1.0 / (qvals[n] * c);
    out.p_tilde.push_back(c * pvals[n]);
  }
  return out;
}

std::optional<int> detect_termination(const PQSequences& pq, double tol) {
  for (int n = 0; n <= pq.depth(); ++n) {
    if (is_identically_zero(pq.q[static_cast<std::size_t>(n)], pq.scale, tol)) {
      return n;
    }
  }
  return std::nullopt;
}

std::vector<double> aim_limit_terms(const CFState& state) {
  std::vector<double> terms;
  double v = -1.0;
  for (int n = 0; n <= state.depth(); ++n) {
    v = -state.qvals[static_cast<std::size_t>(n)] * v;
    const double den = state.denominator(n) * state.denominator(n - 1);
    if (den == 0.0) {
      throw Error(ErrorCode::ZeroDenominator, "B_" + std::to_string(n) + " B_" + std::to_string(n - 1) + " = 0");
    }
    terms.push_back(v / den);
  }
  return terms;
}

}  // namespace aim
