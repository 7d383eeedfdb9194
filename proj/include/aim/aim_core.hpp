#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "aim/expression.hpp"
#include "aim/series.hpp"

namespace aim {

/// The eigenproblem y'' = lambda0(x) y' + s0(x) y with a named spectral parameter.
///
/// `order` is the Taylor truncation order used for lambda0 and s0 at x0 and
/// `n_max` the deepest iteration level requested. Construction enforces
/// order >= n_max + 2, since every iteration level spends one differentiation.
class ProblemSpec {
 public:
  ProblemSpec(Expression lambda0, Expression s0, double x0, int order, int n_max);

  /// Parses both expressions against `param_name` and validates.
  [[nodiscard]] static ProblemSpec from_strings(const std::string& lambda0, const std::string& s0,
                                                const std::string& param_name, double x0, int order,
                                                int n_max);

  [[nodiscard]] const Expression& lambda0() const noexcept { return lambda0_; }
  [[nodiscard]] const Expression& s0() const noexcept { return s0_; }
  [[nodiscard]] const std::string& param_name() const noexcept { return lambda0_.param_name(); }
  [[nodiscard]] double x0() const noexcept { return x0_; }
  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int n_max() const noexcept { return n_max_; }

  [[nodiscard]] ProblemSpec with_x0(double x0) const;
  [[nodiscard]] ProblemSpec with_depth(int order, int n_max) const;

  [[nodiscard]] TaylorSeries lambda0_series(double param, Warnings* warnings = nullptr) const;
  [[nodiscard]] TaylorSeries s0_series(double param, Warnings* warnings = nullptr) const;

 private:
  Expression lambda0_;
  Expression s0_;
  double x0_;
  int order_;
  int n_max_;
};

/// lambda_n, s_n ladder at x0 together with the termination values delta_n.
struct AIMSequences {
  double x0 = 0.0;
  std::vector<TaylorSeries> lambda;        // lambda_0 .. lambda_N
  std::vector<TaylorSeries> s;             // s_0 .. s_N
  std::vector<double> delta;               // delta[n - 1] holds delta_n, n = 1..N
  std::vector<std::optional<double>> alpha;  // s_n(x0) / lambda_n(x0) where lambda_n(x0) != 0
  // Values at x0 of the ladder run on coefficient magnitudes; they bound the
  // size of the terms summed into lambda_n(x0) and s_n(x0).
  std::vector<double> lambda_bound;
  std::vector<double> s_bound;
  Warnings warnings;

  [[nodiscard]] int depth() const noexcept { return static_cast<int>(lambda.size()) - 1; }
};

/// Builds lambda_n = lambda'_{n-1} + lambda0 lambda_{n-1} + s_{n-1} and
/// s_n = s'_{n-1} + s0 lambda_{n-1} as series at x0 for n = 1..spec.n_max().
[[nodiscard]] AIMSequences aim_iterate(const ProblemSpec& spec, double param);

/// Same, to an explicit depth (depth <= spec.order()).
[[nodiscard]] AIMSequences aim_iterate(const ProblemSpec& spec, double param, int depth);

/// delta_n = lambda_n(x0) s_{n-1}(x0) - lambda_{n-1}(x0) s_n(x0), 1 <= n <= depth.
[[nodiscard]] double delta_n(const AIMSequences& seqs, int n);

/// |delta_n| scaled by the magnitude ladder, L_n S_{n-1} + L_{n-1} S_n; zero when that scale vanishes.
/// Values near machine epsilon mean delta_n vanishes to rounding.
[[nodiscard]] double relative_delta(const AIMSequences& seqs, int n);

/// alpha_n(x0) = s_n(x0) / lambda_n(x0); throws SingularPivot when lambda_n(x0) vanishes.
[[nodiscard]] double alpha_at(const AIMSequences& seqs, int n);

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Taylor coefficient table of Phi_n = (lambda_n, s_n) from the matrix recurrence
/// C[m][n+1] = (m+1) C[m+1][n] + sum_{l<=m} A_{m-l} C[l][n].
///
/// Column n carries entries m = 0 .. m_max + n_max - n.
class CoeffTable {
 public:
  CoeffTable(int m_max, int n_max, std::vector<Mat2> a_coeffs, std::vector<std::vector<Vec2>> columns);

  [[nodiscard]] int m_max() const noexcept { return m_max_; }
  [[nodiscard]] int n_max() const noexcept { return n_max_; }
  /// Largest m available in column n.
  [[nodiscard]] int rows_in_column(int n) const;
  [[nodiscard]] const Vec2& at(int m, int n) const;
  /// k-th Taylor coefficient of the matrix [[lambda0, 1], [s0, 0]].
  [[nodiscard]] const Mat2& a(int k) const { return a_coeffs_.at(static_cast<std::size_t>(k)); }

 private:
  int m_max_;
  int n_max_;
  std::vector<Mat2> a_coeffs_;
  std::vector<std::vector<Vec2>> columns_;
};

/// Requires m_max + n_max <= spec.order(); uses spec.n_max() as the column count.
[[nodiscard]] CoeffTable aim_matrix_iterate(const ProblemSpec& spec, double param, int m_max);

struct Eigenvalue {
  double value;
  double residual;  // |E(n + 2) - E(n)|; +inf when the deeper ladder shows no bracketed root
  int n_used;
};

struct EigenSearchOptions {
  unsigned threads = 1;
};

/// Scans E -> delta_n(E) on a uniform grid, brackets sign changes and refines each
/// by bisection until the bracket is narrower than tol. Each root is re-located at
/// depth n + 2 within the same bracket. Results are sorted by E.
[[nodiscard]] std::vector<Eigenvalue> find_eigenvalues(const ProblemSpec& spec, double e_min, double e_max,
                                                       int grid_points, int n, double tol,
                                                       Warnings* warnings = nullptr,
                                                       EigenSearchOptions options = {});

}  // namespace aim
