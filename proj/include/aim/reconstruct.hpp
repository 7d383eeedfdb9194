#pragma once

#include <optional>

#include "aim/aim_core.hpp"
#include "aim/cf_engine.hpp"
#include "aim/series.hpp"

namespace aim {

/// Series for alpha at x0 together with where it came from.
struct AlphaSeries {
  enum class Source { TerminatedCF, ApproximantDepthN, External };
  TaylorSeries series;
  Source source = Source::External;
  std::optional<int> depth;  // approximant level used, for TerminatedCF and ApproximantDepthN

  [[nodiscard]] static AlphaSeries external(TaylorSeries s) { return {std::move(s), Source::External, std::nullopt}; }
};

[[nodiscard]] const char* to_string(AlphaSeries::Source source) noexcept;

/// alpha = A_K / B_K from the series form of the partial numerator/denominator
/// recurrences. When q_N vanishes identically the finite fraction C_{N-1} is
/// exact and is used; otherwise K is the ladder depth.
[[nodiscard]] AlphaSeries alpha_from_ladder(const PQSequences& pq);

/// alpha' - alpha^2 - lambda0 alpha + s0.
[[nodiscard]] TaylorSeries riccati_residual(const AlphaSeries& alpha, const ProblemSpec& spec, double E);

/// Zeroth-order coefficient of L - (d/dx + beta)(d/dx + alpha) with
/// beta = -lambda0 - alpha and L y = y'' - lambda0 y' - s0 y, that is
/// -(alpha' + alpha beta + s0). Vanishes iff L factors with the right factor
/// annihilating exp(-int alpha); equals minus the Riccati residual.
[[nodiscard]] TaylorSeries factorization_residual(const AlphaSeries& alpha, const ProblemSpec& spec, double E);

/// y = exp(-int alpha) [C1 int exp(int (lambda0 + 2 alpha)) + C2], every integral vanishing at x0.
/// Requires alpha of order at least 4.
[[nodiscard]] TaylorSeries build_solution(const AlphaSeries& alpha, const ProblemSpec& spec, double E, double C1,
                                          double C2);

/// y'' - lambda0 y' - s0 y, truncated to the common order.
[[nodiscard]] TaylorSeries ode_residual(const TaylorSeries& y, const ProblemSpec& spec, double E);

}  // namespace aim
