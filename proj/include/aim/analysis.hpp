#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aim/aim_core.hpp"
#include "aim/birkhoff_adams.hpp"
#include "aim/cf_engine.hpp"

namespace aim {

// ---------------------------------------------------------------------------
// Convergence of K(1/p_n) with positive partial denominators

struct ConvergenceReport {
  enum class Verdict { Converges, Diverges, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  double partial_sum = 0.0;          // sum of all supplied p_n
  double product_bound = 0.0;        // mu^2 * partial_sum, lower bound on B_{N-1} B_N
  std::optional<double> exp_bound;   // e^{2L} with L the partial sum, set when the sum has settled
  double mu = 0.0;                   // min(1, p_0)
};

[[nodiscard]] std::string to_string(ConvergenceReport::Verdict v);

inline constexpr double kCauchyIncrement = 1e-12;

/// Converges when the partial sum exceeds `threshold`; Diverges when the last
/// `window` terms add less than 1e-12; Inconclusive otherwise.
/// Throws NonPositiveP if some p_n <= 0.
[[nodiscard]] ConvergenceReport stern_seidel(const std::vector<double>& pvals, double threshold = 50.0,
                                             int window = 8);

struct BoundRow {
  int n;
  double lhs;
  double rhs;
  bool pass;
};

/// Relative slack granted to the non-strict bound comparisons for rounding.
inline constexpr double kBoundRoundingSlack = 1e-14;

/// |C_n - C_{n-1}| <= 1/((n+1) mu^2) for n = 0..N, with C_{-1} = 0.
/// Requires all p_n >= 1 and unit numerators; HypothesisViolated otherwise.
[[nodiscard]] std::vector<BoundRow> bound_check(const CFState& state);

/// B_{n-1} B_n >= mu^2 sum_{k<=n} p_k for n = 0..N on a unit-numerator state with p_n > 0.
[[nodiscard]] std::vector<BoundRow> denominator_bound_check(const CFState& state);

// ---------------------------------------------------------------------------
// Minimal solutions of x_n = p_n x_{n-1} + q_n x_{n-2}

inline constexpr double kMillerAgreement = 1e-12;

/// x_{-1}/x_{-2} of the solution obtained by recurring down from x_N = 0, x_{N-1} = 1.
[[nodiscard]] double backward_ratio(const std::vector<double>& pvals, const std::vector<double>& qvals, int N);

/// 16, 32, 64, ... up to and including len - 1.
[[nodiscard]] std::vector<int> default_depth_schedule(std::size_t len);

/// Backward recurrence escalated along `depth_schedule` (default schedule when
/// empty) until two successive estimates agree within 1e-12 relative.
/// Throws ZeroQ, NoConvergence, or InsufficientData (fewer than two depths).
[[nodiscard]] double miller_minimal_ratio(const std::vector<double>& pvals, const std::vector<double>& qvals,
                                          std::vector<int> depth_schedule = {});

struct PincherleResult {
  double cf_limit = 0.0;
  double backward_ratio = 0.0;
  int relation_sign = -1;
  double agreement = 0.0;  // |cf_limit - relation_sign * backward_ratio|
};

[[nodiscard]] PincherleResult pincherle_check(const std::vector<double>& pvals, const std::vector<double>& qvals,
                                              Warnings* warnings = nullptr, std::vector<int> depth_schedule = {});

// ---------------------------------------------------------------------------
// Asymptotic classification

struct MonicTransform {
  std::vector<double> t;  // t[n - 1] = 4 q_n / (p_{n-1} p_n), n = 1..len-1
  double q_limit = 0.0;
  double tail_variation = 0.0;  // max |t_n - t_N| over the last half
};

/// Throws ZeroP when some p_{n-1} p_n vanishes, InsufficientData below 9 levels.
[[nodiscard]] MonicTransform monic_transform(const std::vector<double>& pvals, const std::vector<double>& qvals);

/// r_+- = 1 +- sqrt(1 - q), principal branch.
[[nodiscard]] std::pair<Complex, Complex> characteristic_roots(double q);

struct PowerLaw {
  double a;
  double sigma;
  double b;
  double tau;
};

struct DeclaredData {
  std::optional<PowerLaw> power_law;
  std::optional<std::pair<std::vector<double>, std::vector<double>>> ba_coeffs;  // (a_j, b_j)
};

enum class CaseLabel { C1a, C1b, C1c, C2, C3, C4a, C4b, C5a, C5b, C5c_i, C5c_ii, C5c_iii, Unclassified };

[[nodiscard]] std::string to_string(CaseLabel label);

/// Decay exponent of a sampled tail from a power-law envelope fit; nullopt when
/// every sample is negligible (the tail counts as zero).
struct TailFit {
  std::optional<double> beta;
  bool negligible = false;
  [[nodiscard]] bool decays_faster_than(double exponent) const { return negligible || (beta && *beta > exponent); }
};

[[nodiscard]] TailFit fit_tail_exponent(const std::vector<double>& values, std::size_t first_index, double floor);

/// Candidate ratios for the power-law case together with the selection made.
/// "formula" is the closed form as usually quoted for the case; "alternative"
/// swaps the exponent sign (4a) or takes the roots of rho^2 - a rho - b (4b).
/// The candidate closer to the numeric ratio is selected.
struct PowerLawPrediction {
  Complex minimal_formula;
  Complex minimal_alternative;
  Complex dominant_formula;
  Complex dominant_alternative;
  std::string minimal_selected;   // "formula" or "alternative"
  std::string dominant_selected;
};

struct ClassificationReport {
  double q_limit = 0.0;
  std::vector<double> a_n_samples;  // a_n = t_n - q, n = 1..len-1
  std::pair<Complex, Complex> roots;
  CaseLabel case_label = CaseLabel::Unclassified;
  std::optional<PowerLaw> power_law;
  std::optional<PowerLawPrediction> power_law_prediction;
  std::optional<BirkhoffAdamsData> ba_data;
  bool minimal_exists = false;
  double numeric_dominant_ratio = 0.0;
  double numeric_minimal_ratio = 0.0;
  Complex predicted_dominant_ratio;
  Complex predicted_minimal_ratio;
  int depth = 0;
  bool consistency = false;
  std::uint64_t seed = 0;
  Warnings warnings;
};

inline constexpr std::size_t kMinClassifyLevels = 30;
inline constexpr int kClassifyDepth = 200;
inline constexpr double kConsistencyTolerance = 0.05;
inline constexpr double kUnitQTolerance = 1e-6;

[[nodiscard]] ClassificationReport classify(const std::vector<double>& pvals, const std::vector<double>& qvals,
                                            const DeclaredData& declared = {}, std::uint64_t seed = 12345);

/// Ratio x_d / x_{d-1} after forward iteration from a seeded random start.
[[nodiscard]] double forward_dominant_ratio(const std::vector<double>& pvals, const std::vector<double>& qvals,
                                            int d, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Growth of lambda_n(x0)

struct GrowthFit {
  double a0 = 0.0;
  double a1 = 0.0;
  double rho = 0.0;  // 1 / a1, or +inf when a1 <= 0
  int samples = 0;
};

inline constexpr std::size_t kMinGrowthSamples = 10;

/// Least-squares fit of |lambda_n(x0) / lambda_{n-1}(x0)| ~ a0 + a1 n over the
/// last half of the valid ratios. Throws InsufficientData below 10 samples.
[[nodiscard]] GrowthFit ratio_growth_fit(const AIMSequences& seqs);

}  // namespace aim
