#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace aim {

using Complex = std::complex<double>;

/// Double characteristic root r = -a_0/2 with a_1 r + b_1 != 0.
struct DoubleRootData {
  Complex r;
  std::pair<Complex, Complex> gamma;  // +-2 sqrt((a_0 a_1 - 2 b_1) / (2 b_0))
  Complex alpha_tilde;                // 1/4 + b_1 / (2 b_0)
  std::pair<Complex, Complex> c1;     // closed-form first correction for gamma_+ and gamma_-
};

/// Double root with 2 b_1 = a_0 a_1: exponent roots of
/// a(a - 1) r^2 + (a_1 a + a_2) r + b_2 = 0, ordered by real part.
struct EqualExponentData {
  enum class Subcase {
    NonIntegerGap,  // (i): two solutions r^n n^a sum c_j n^-j
    IntegerGap,     // (ii): second solution may carry a log n term
    EqualRoots,     // (iii): second solution not constructed
  };
  Complex r;
  std::pair<Complex, Complex> alpha;  // Re alpha.first >= Re alpha.second
  Subcase subcase = Subcase::NonIntegerGap;
  bool log_term = false;
};

/// Asymptotic data for x_{n+2} + a(n) x_{n+1} + b(n) x_n = 0 with
/// a(n) ~ sum a_j n^-j and b(n) ~ sum b_j n^-j.
struct BirkhoffAdamsData {
  std::vector<double> a_coeffs;
  std::vector<double> b_coeffs;
  std::pair<Complex, Complex> r_pm;  // roots of r^2 + a_0 r + b_0 = 0, |first| >= |second|
  bool distinct_roots = true;
  std::optional<std::pair<Complex, Complex>> alpha_pm;  // (a_1 r + b_1) / (a_0 r + 2 b_0)
  // c_table.first[k] = c_{+,k}, c_table.second[k] = c_{-,k}, k = 0..k_max
  std::pair<std::vector<Complex>, std::vector<Complex>> c_table;
  std::optional<DoubleRootData> double_root;
  std::optional<EqualExponentData> equal_exponent;
};

/// Relative tolerance for deciding a_0^2 = 4 b_0 and 2 b_1 = a_0 a_1.
inline constexpr double kRootCoincidenceTolerance = 1e-12;

/// (z choose k) as a falling-factorial product.
[[nodiscard]] Complex generalized_binomial(Complex z, int k);

/// Throws ZeroB0 when b_0 = 0, DegenerateDenominator when a_0 r + 2 b_0
/// vanishes at a simple root, InvalidArgument when k_max < 1.
[[nodiscard]] BirkhoffAdamsData birkhoff_adams(const std::vector<double>& a_coeffs,
                                               const std::vector<double>& b_coeffs, int k_max);

/// Leading-order ratio x_{n+1}/x_n at index n predicted by the expansion for the
/// root selected by `plus`.
[[nodiscard]] Complex birkhoff_adams_ratio(const BirkhoffAdamsData& data, bool plus, double n);

}  // namespace aim
