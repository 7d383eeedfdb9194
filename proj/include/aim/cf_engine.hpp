#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aim/aim_core.hpp"
#include "aim/series.hpp"

namespace aim {

/// Coefficients below this fraction of the ladder's largest coefficient count as zero.
inline constexpr double kTerminationTolerance = 1e-12;

struct PQStop {
  enum class Kind {
    ExactZero,   // q at `level` is identically zero: the fraction terminates
    SmallPivot,  // q at `level` vanishes at x0 but not identically
  };
  int level = 0;
  Kind kind = Kind::ExactZero;
};

/// p_n, q_n ladder of the continued fraction for alpha, p_0 = lambda0 and q_0 = s0.
struct PQSequences {
  double x0 = 0.0;
  std::vector<TaylorSeries> p;
  std::vector<TaylorSeries> q;
  std::optional<PQStop> stop;
  double scale = 0.0;  // largest coefficient magnitude seen in the ladder
  Warnings warnings;

  [[nodiscard]] int depth() const noexcept { return static_cast<int>(p.size()) - 1; }
  [[nodiscard]] std::vector<double> pvals() const;
  [[nodiscard]] std::vector<double> qvals() const;
};

/// p_n = p_{n-1} + q'_{n-1}/q_{n-1}, q_n = q_{n-1} + p'_{n-1} - p_{n-1} q'_{n-1}/q_{n-1}.
///
/// Stops early, recording the level in `stop`, when q_{n-1} is identically zero
/// or vanishes at x0.
[[nodiscard]] PQSequences pq_iterate(const ProblemSpec& spec, double param);
[[nodiscard]] PQSequences pq_iterate(const ProblemSpec& spec, double param, int depth);

/// Partial numerators/denominators and approximants of K(q_n / p_n) at one point.
///
/// A and B satisfy X_n = p_n X_{n-1} + q_n X_{n-2} with A_{-1} = 0, A_{-2} = 1,
/// B_{-1} = 1, B_{-2} = 0. The recurrences run in double-double; A/B hold the
/// rounded values and A_lo/B_lo the residual low parts.
struct CFState {
  double x = 0.0;
  std::vector<double> pvals;
  std::vector<double> qvals;
  std::vector<double> A;  // A[n + 2], n = -2..N
  std::vector<double> B;
  std::vector<double> A_lo;
  std::vector<double> B_lo;
  std::vector<std::optional<double>> C;  // C[n], undefined where B_n = 0
  std::vector<double> v;                 // v[n + 1] = A_n B_{n-1} - A_{n-1} B_n, n = -1..N

  [[nodiscard]] int depth() const noexcept { return static_cast<int>(C.size()) - 1; }
  [[nodiscard]] double numerator(int n) const { return A.at(static_cast<std::size_t>(n + 2)); }
  [[nodiscard]] double denominator(int n) const { return B.at(static_cast<std::size_t>(n + 2)); }
  [[nodiscard]] std::optional<double> approximant(int n) const { return C.at(static_cast<std::size_t>(n)); }
  [[nodiscard]] double determinant(int n) const { return v.at(static_cast<std::size_t>(n + 1)); }
  /// Deepest defined approximant, if any.
  [[nodiscard]] std::optional<double> last_approximant() const;
};

/// Runs the three-term recurrences to level N (needs N + 1 values of each).
[[nodiscard]] CFState cf_approximants(const std::vector<double>& pvals, const std::vector<double>& qvals, int N,
                                      double x = 0.0);

/// State at x0 from a computed ladder, to its full depth.
[[nodiscard]] CFState cf_state(const PQSequences& pq);

struct DeterminantCheck {
  std::vector<double> v;        // v_{-1}..v_N from the partial numerators/denominators
  std::vector<double> product;  // (-1)^n prod_{j<=n} q_j, same indexing
  double max_rel_error = 0.0;
};

/// Compares v_n = A_n B_{n-1} - A_{n-1} B_n against (-1)^n prod_{j=0}^{n} q_j.
[[nodiscard]] DeterminantCheck cf_determinants(const CFState& state);

/// Partial sums sum_{k=0}^{n-1} (-1)^k q_0...q_k / (B_k B_{k-1}) for n = 1..N+1;
/// element n-1 reproduces C_{n-1}. Throws ZeroDenominator if some B_k vanishes.
[[nodiscard]] std::vector<double> alpha_partial_sums(const CFState& state);

/// q_0 * K(1 / p~_n) with the same approximants as K(q_n / p_n).
struct UnitForm {
  double prefactor = 1.0;
  std::vector<double> p_tilde;
};

/// Equivalence transform to unit partial numerators; throws ZeroPartialNumerator if some q_n = 0.
[[nodiscard]] UnitForm cf_equiv_unit(const std::vector<double>& pvals, const std::vector<double>& qvals);

/// Smallest N whose q_N is identically zero relative to the ladder scale.
[[nodiscard]] std::optional<int> detect_termination(const PQSequences& pq, double tol = kTerminationTolerance);

/// v_n / (B_n B_{n-1}) = C_n - C_{n-1} for n = 0..N, with v_n from the product formula.
/// Throws ZeroDenominator when some B_n B_{n-1} vanishes.
[[nodiscard]] std::vector<double> aim_limit_terms(const CFState& state);

}  // namespace aim
