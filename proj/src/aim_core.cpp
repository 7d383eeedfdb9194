#include "aim/aim_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace aim {

ProblemSpec::ProblemSpec(Expression lambda0, Expression s0, double x0, int order, int n_max)
    : lambda0_(std::move(lambda0)), s0_(std::move(s0)), x0_(x0), order_(order), n_max_(n_max) {
  if (lambda0_.param_name() != s0_.param_name()) {
    throw Error(ErrorCode::InvalidSpec, "lambda0 and s0 declare different parameters");
  }
  if (!std::isfinite(x0_)) {
    throw Error(ErrorCode::InvalidSpec, "x0 must be finite");
  }
  if (n_max_ < 1) {
    throw Error(ErrorCode::InvalidSpec, "n_max must be at least 1");
  }
  if (order_ < n_max_ + 2) {
    throw Error(ErrorCode::InvalidSpec, "order " + std::to_string(order_) + " < n_max + 2 = " +
                                            std::to_string(n_max_ + 2));
  }
}

ProblemSpec ProblemSpec::from_strings(const std::string& lambda0, const std::string& s0,
                                      const std::string& param_name, double x0, int order, int n_max) {
  return ProblemSpec(Expression::parse(lambda0, param_name), Expression::parse(s0, param_name), x0, order,
                     n_max);
}

ProblemSpec ProblemSpec::with_x0(double x0) const { return ProblemSpec(lambda0_, s0_, x0, order_, n_max_); }

ProblemSpec ProblemSpec::with_depth(int order, int n_max) const {
  return ProblemSpec(lambda0_, s0_, x0_, order, n_max);
}

TaylorSeries ProblemSpec::lambda0_series(double param, Warnings* warnings) const {
  return lambda0_.to_series(param, x0_, order_, warnings);
}

TaylorSeries ProblemSpec::s0_series(double param, Warnings* warnings) const {
  return s0_.to_series(param, x0_, order_, warnings);
}

namespace {

TaylorSeries magnitudes(const TaylorSeries& a) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (double& v : c) {
    v = std::abs(v);
  }
  return TaylorSeries(a.center(), std::move(c));
}

}  // namespace

AIMSequences aim_iterate(const ProblemSpec& spec, double param) {
  return aim_iterate(spec, param, spec.n_max());
}

AIMSequences aim_iterate(const ProblemSpec& spec, double param, int depth) {
  if (depth < 0 || depth > spec.order()) {
    throw Error(ErrorCode::OrderExhausted, "depth " + std::to_string(depth) + " exceeds series order " +
                                               std::to_string(spec.order()));
  }
  AIMSequences out;
  out.x0 = spec.x0();
  const TaylorSeries lambda0 = spec.lambda0_series(param, &out.warnings);
  const TaylorSeries s0 = spec.s0_series(param, &out.warnings);
  if (std::abs(lambda0.value()) < kPivotEpsilon) {
    std::ostringstream os;
    os << "lambda0 vanishes at x0 = " << spec.x0() << "; alpha_0 is undefined there";
    out.warnings.push_back(os.str());
  }
  out.lambda.reserve(static_cast<std::size_t>(depth) + 1);
  out.s.reserve(static_cast<std::size_t>(depth) + 1);
  out.lambda.push_back(lambda0);
  out.s.push_back(s0);
  // Same ladder on coefficient magnitudes: an envelope for the terms whose
  // cancellation produces lambda_n(x0) and s_n(x0).
  const TaylorSeries lambda0_abs = magnitudes(lambda0);
  const TaylorSeries s0_abs = magnitudes(s0);
  TaylorSeries lb = lambda0_abs;
  TaylorSeries sb = s0_abs;
  out.lambda_bound.push_back(lb.value());
  out.s_bound.push_back(sb.value());
  for (int n = 1; n <= depth; ++n) {
    const TaylorSeries& lp = out.lambda.back();
    const TaylorSeries& sp = out.s.back();
    TaylorSeries ln = derivative(lp) + lambda0 * lp + sp;
    TaylorSeries sn = derivative(sp) + s0 * lp;
    out.lambda.push_back(std::move(ln));
    out.s.push_back(std::move(sn));
    TaylorSeries lbn = derivative(lb) + lambda0_abs * lb + sb;
    sb = derivative(sb) + s0_abs * lb;
    lb = std::move(lbn);
    out.lambda_bound.push_back(lb.value());
    out.s_bound.push_back(sb.value());
  }
  out.delta.reserve(static_cast<std::size_t>(depth));
  for (int n = 1; n <= depth; ++n) {
    out.delta.push_back(out.lambda[n].value() * out.s[n - 1].value() -
                        out.lambda[n - 1].value() * out.s[n].value());
  }
  out.alpha.reserve(static_cast<std::size_t>(depth) + 1);
  for (int n = 0; n <= depth; ++n) {
    const double l = out.lambda[n].value();
    if (std::abs(l) < kPivotEpsilon) {
      out.alpha.emplace_back(std::nullopt);
    } else {
      out.alpha.emplace_back(out.s[n].value() / l);
    }
  }
  return out;
}

double delta_n(const AIMSequences& seqs, int n) {
  if (n < 1 || n > seqs.depth()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "delta_" + std::to_string(n) + " requested from a depth-" + std::to_string(seqs.depth()) +
                    " ladder");
  }
  return seqs.delta[static_cast<std::size_t>(n) - 1];
}

double relative_delta(const AIMSequences& seqs, int n) {
  const double d = delta_n(seqs, n);
  const auto i = static_cast<std::size_t>(n);
  const double scale = seqs.lambda_bound[i] * seqs.s_bound[i - 1] + seqs.lambda_bound[i - 1] * seqs.s_bound[i];
  if (scale == 0.0) {
    return 0.0;
  }
  return std::abs(d) / scale;
}

double alpha_at(const AIMSequences& seqs, int n) {
  if (n < 0 || n > seqs.depth()) {
    throw Error(ErrorCode::IndexOutOfRange, "alpha_" + std::to_string(n) + " out of range");
  }
  const auto& a = seqs.alpha[static_cast<std::size_t>(n)];
  if (!a) {
    throw Error(ErrorCode::SingularPivot, "lambda_" + std::to_string(n) + "(x0) vanishes");
  }
  return *a;
}

CoeffTable::CoeffTable(int m_max, int n_max, std::vector<Mat2> a_coeffs,
                       std::vector<std::vector<Vec2>> columns)
    : m_max_(m_max), n_max_(n_max), a_coeffs_(std::move(a_coeffs)), columns_(std::move(columns)) {}

int CoeffTable::rows_in_column(int n) const {
  return static_cast<int>(columns_.at(static_cast<std::size_t>(n)).size()) - 1;
}

const Vec2& CoeffTable::at(int m, int n) const {
  if (n < 0 || n > n_max_ || m < 0 || m > rows_in_column(n)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "coefficient (" + std::to_string(m) + ", " + std::to_string(n) + ") outside the table");
  }
  return columns_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

CoeffTable aim_matrix_iterate(const ProblemSpec& spec, double param, int m_max) {
  const int n_max = spec.n_max();
  if (m_max < 0 || m_max + n_max > spec.order()) {
    throw Error(ErrorCode::OrderExhausted, "m_max + n_max = " + std::to_string(m_max + n_max) +
                                               " exceeds order " + std::to_string(spec.order()));
  }
  const int rows0 = m_max + n_max;
  const TaylorSeries lambda0 = spec.lambda0_series(param);
  const TaylorSeries s0 = spec.s0_series(param);

  std::vector<Mat2> a(static_cast<std::size_t>(rows0) + 1);
  for (int k = 0; k <= rows0; ++k) {
    a[k] = Mat2{{{lambda0[k], k == 0 ? 1.0 : 0.0}, {s0[k], 0.0}}};
  }

  std::vector<std::vector<Vec2>> cols;
  cols.reserve(static_cast<std::size_t>(n_max) + 1);
  std::vector<Vec2> first(static_cast<std::size_t>(rows0) + 1);
  for (int m = 0; m <= rows0; ++m) {
    first[m] = Vec2{lambda0[m], s0[m]};
  }
  cols.push_back(std::move(first));

  for (int n = 0; n < n_max; ++n) {
    const std::vector<Vec2>& prev = cols.back();
    const int rows = rows0 - n - 1;
    std::vector<Vec2> next(static_cast<std::size_t>(rows) + 1);
    for (int m = 0; m <= rows; ++m) {
      Vec2 acc{static_cast<double>(m + 1) * prev[m + 1][0], static_cast<double>(m + 1) * prev[m + 1][1]};
      for (int l = 0; l <= m; ++l) {
        const Mat2& am = a[m - l];
        acc[0] += am[0][0] * prev[l][0] + am[0][1] * prev[l][1];
        acc[1] += am[1][0] * prev[l][0] + am[1][1] * prev[l][1];
      }
      next[m] = acc;
    }
    cols.push_back(std::move(next));
  }
  return CoeffTable(m_max, n_max, std::move(a), std::move(cols));
}

namespace {

struct GridSample {
  double e = 0.0;
  double shallow = 0.0;
  double deep = 0.0;
  bool valid = false;
  std::string failure;
};

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Bisection on a bracket with f(lo), f(hi) of opposite signs; returns the midpoint
// of the final bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi, double flo, double tol,
              Warnings* warnings) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    double fm = 0.0;
    try {
      fm = f(mid);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularPivot && e.code() != ErrorCode::Overflow) {
        throw;
      }
      std::ostringstream os;
      os << "bisection stopped at E = " << mid << ": " << e.what();
      warn(warnings, os.str());
      break;
    }
    if (fm == 0.0) {
      return mid;
    }
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Eigenvalue> find_eigenvalues(const ProblemSpec& spec, double e_min, double e_max, int grid_points,
                                         int n, double tol, Warnings* warnings, EigenSearchOptions options) {
  if (!(e_min < e_max)) {
    throw Error(ErrorCode::InvalidArgument, "empty search interval");
  }
  if (grid_points < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two grid points");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  }
  if (n < 1 || n > spec.n_max()) {
    throw Error(ErrorCode::InvalidArgument,
                "depth " + std::to_string(n) + " outside 1.." + std::to_string(spec.n_max()));
  }
  const int deep_n = n + 2;
  if (deep_n > spec.order()) {
    throw Error(ErrorCode::OrderExhausted, "stability check at depth " + std::to_string(deep_n) +
                                               " needs order >= " + std::to_string(deep_n));
  }

  std::vector<GridSample> grid(static_cast<std::size_t>(grid_points));
  const double step = (e_max - e_min) / static_cast<double>(grid_points - 1);
  auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      GridSample& g = grid[i];
      g.e = i + 1 == grid.size() ? e_max : e_min + static_cast<double>(i) * step;
      try {
        const AIMSequences seqs = aim_iterate(spec, g.e, deep_n);
        g.shallow = delta_n(seqs, n);
        g.deep = delta_n(seqs, deep_n);
        g.valid = std::isfinite(g.shallow) && std::isfinite(g.deep);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularPivot && e.code() != ErrorCode::Overflow) {
          throw;
        }
        g.failure = e.what();
      }
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(grid_points)));
  if (threads == 1) {
    evaluate_range(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (grid.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(grid.size(), begin + chunk);
      if (begin < end) {
        pool.emplace_back(evaluate_range, begin, end);
      }
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  bool any_valid = false;
  bool all_zero = true;
  for (const GridSample& g : grid) {
    if (!g.valid) {
      std::ostringstream os;
      os << "grid point E = " << g.e << " skipped: " << g.failure;
      warn(warnings, os.str());
      continue;
    }
    any_valid = true;
    if (g.shallow != 0.0) {
      all_zero = false;
    }
  }
  if (!any_valid) {
    warn(warnings, "no grid point could be evaluated");
    return {};
  }
  if (all_zero) {
    warn(warnings, "DegenerateDelta: delta_" + std::to_string(n) + " vanishes on the whole grid");
    return {};
  }

  auto shallow_f = [&](double e) { return delta_n(aim_iterate(spec, e, n), n); };
  auto deep_f = [&](double e) { return delta_n(aim_iterate(spec, e, deep_n), deep_n); };

  // Locates the depth-(n+2) root inside [lo, hi] given grid values at the ends.
  auto deep_root = [&](double lo, double hi, double flo, double fhi, double near) -> double {
    if (flo == 0.0) {
      return lo;
    }
    if (fhi == 0.0) {
      return hi;
    }
    if (sign_of(flo) != sign_of(fhi)) {
      return bisect(deep_f, lo, hi, flo, tol, warnings);
    }
    const double fn = deep_f(near);
    if (fn == 0.0) {
      return near;
    }
    if (sign_of(fn) != sign_of(flo)) {
      return near - lo <= hi - near ? bisect(deep_f, lo, near, flo, tol, warnings)
                                    : bisect(deep_f, near, hi, fn, tol, warnings);
    }
    // The deeper root may sit just across a bracket end; look one cell further out.
    const double w = hi - lo;
    double best = std::numeric_limits<double>::quiet_NaN();
    auto consider = [&](double a, double b, double fa, double fb) {
      if (fa == 0.0 || fb == 0.0 || sign_of(fa) == sign_of(fb)) {
        return;
      }
      const double root = bisect(deep_f, a, b, fa, tol, warnings);
      if (!std::isfinite(best) || std::abs(root - near) < std::abs(best - near)) {
        best = root;
      }
    };
    try {
      consider(lo - w, lo, deep_f(lo - w), flo);
      consider(hi, hi + w, fhi, deep_f(hi + w));
    } catch (const Error&) {
    }
    return best;
  };

  std::vector<Eigenvalue> roots;
  auto record = [&](double e, double e_deep) {
    Eigenvalue ev{e, std::numeric_limits<double>::infinity(), n};
    if (std::isfinite(e_deep)) {
      ev.residual = std::abs(e_deep - e);
    } else {
      std::ostringstream os;
      os << "root near E = " << e << " not bracketed at depth " << deep_n;
      warn(warnings, os.str());
    }
    roots.push_back(ev);
  };

  const std::size_t g_count = grid.size();
  for (std::size_t i = 0; i < g_count; ++i) {
    const GridSample& g = grid[i];
    if (!g.valid) {
      continue;
    }
    if (g.shallow == 0.0) {
      const std::size_t lo_i = i > 0 && grid[i - 1].valid ? i - 1 : i;
      const std::size_t hi_i = i + 1 < g_count && grid[i + 1].valid ? i + 1 : i;
      double e_deep = std::numeric_limits<double>::quiet_NaN();
      if (g.deep == 0.0) {
        e_deep = g.e;
      } else if (lo_i != i && sign_of(grid[lo_i].deep) != sign_of(g.deep)) {
        e_deep = deep_root(grid[lo_i].e, g.e, grid[lo_i].deep, g.deep, g.e);
      } else if (hi_i != i) {
        e_deep = deep_root(g.e, grid[hi_i].e, g.deep, grid[hi_i].deep, g.e);
      }
      record(g.e, e_deep);
      continue;
    }
    if (i + 1 >= g_count) {
      continue;
    }
    const GridSample& h = grid[i + 1];
    if (!h.valid || h.shallow == 0.0 || sign_of(g.shallow) == sign_of(h.shallow)) {
      continue;
    }
    const double e = bisect(shallow_f, g.e, h.e, g.shallow, tol, warnings);
    record(e, deep_root(g.e, h.e, g.deep, h.deep, e));
  }
  std::sort(roots.begin(), roots.end(), [](const Eigenvalue& a, const Eigenvalue& b) { return a.value < b.value; });
  return roots;
}

}  // namespace aim
