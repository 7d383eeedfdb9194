#include "aim/birkhoff_adams.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aim/errors.hpp"

namespace aim {

namespace {

double coeff(const std::vector<double>& c, int j) {
  return j >= 0 && static_cast<std::size_t>(j) < c.size() ? c[static_cast<std::size_t>(j)] : 0.0;
}

bool nearly_zero(Complex value, double scale) {
  return std::abs(value) <= kRootCoincidenceTolerance * std::max(scale, 1e-300);
}

std::vector<Complex> c_recurrence(Complex r, Complex alpha, const std::vector<double>& a, const std::vector<double>& b,
                                  int k_max) {
  std::vector<Complex> c{Complex(1.0)};
  auto term = [&](int j, int s) {
    const Complex shifted = alpha - static_cast<double>(j);
    Complex inner = 0.0;
    for (int k = j; k <= s; ++k) {
      inner += generalized_binomial(shifted, k - j) * coeff(a, s - k);
    }
    return r * r * std::ldexp(1.0, s - j) * generalized_binomial(shifted, s - j) + r * inner + coeff(b, s - j);
  };
  for (int s = 2; s <= k_max + 1; ++s) {
    Complex rhs = 0.0;
    for (int j = 0; j < s - 1; ++j) {
      rhs -= term(j, s) * c[static_cast<std::size_t>(j)];
    }
    const Complex diag = term(s - 1, s);
    if (std::abs(diag) == 0.0) {
      throw Error(ErrorCode::DegenerateDenominator,
                  "coefficient of c_" + std::to_string(s - 1) + " vanishes in the expansion recurrence");
    }
    c.push_back(rhs / diag);
  }
  return c;
}

}  // namespace

Complex generalized_binomial(Complex z, int k) {
  if (k < 0) {
    return 0.0;
  }
  Complex out = 1.0;
  for (int i = 0; i < k; ++i) {
    out *= (z - static_cast<double>(i)) / static_cast<double>(i + 1);
  }
  return out;
}

BirkhoffAdamsData birkhoff_adams(const std::vector<double>& a_coeffs, const std::vector<double>& b_coeffs,
                                 int k_max) {
  if (k_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "k_max must be at least 1");
  }
  const double a0 = coeff(a_coeffs, 0);
  const double a1 = coeff(a_coeffs, 1);
  const double a2 = coeff(a_coeffs, 2);
  const double b0 = coeff(b_coeffs, 0);
  const double b1 = coeff(b_coeffs, 1);
  const double b2 = coeff(b_coeffs, 2);
  if (b0 == 0.0) {
    throw Error(ErrorCode::ZeroB0, "b_0 = 0");
  }

  BirkhoffAdamsData out;
  out.a_coeffs = a_coeffs;
  out.b_coeffs = b_coeffs;
  const Complex disc = std::sqrt(Complex(a0 * a0 / 4.0 - b0));
  Complex rp = -a0 / 2.0 + disc;
  Complex rm = -a0 / 2.0 - disc;
  if (std::abs(rp) < std::abs(rm)) {
    std::swap(rp, rm);
  }
  out.r_pm = {rp, rm};
  out.distinct_roots = !(std::abs(a0 * a0 - 4.0 * b0) <=
                         kRootCoincidenceTolerance * std::max(a0 * a0, 4.0 * std::abs(b0)));

  if (out.distinct_roots) {
    auto exponent = [&](Complex r) {
      const Complex den = a0 * r + 2.0 * b0;
      if (nearly_zero(den, std::abs(a0 * r) + 2.0 * std::abs(b0))) {
        std::ostringstream os;
        os << "a_0 r + 2 b_0 = 0 at r = " << r.real() << (r.imag() < 0 ? " - " : " + ") << std::abs(r.imag())
           << "i";
        throw Error(ErrorCode::DegenerateDenominator, os.str());
      }
      return (a1 * r + b1) / den;
    };
    const Complex alpha_p = exponent(rp);
    const Complex alpha_m = exponent(rm);
    out.alpha_pm = std::make_pair(alpha_p, alpha_m);
    out.c_table = {c_recurrence(rp, alpha_p, a_coeffs, b_coeffs, k_max),
                   c_recurrence(rm, alpha_m, a_coeffs, b_coeffs, k_max)};
    return out;
  }

  const Complex r = -a0 / 2.0;
  out.r_pm = {r, r};
  const Complex resonance = a1 * r + b1;
  if (!nearly_zero(resonance, std::abs(a1 * r) + std::abs(b1))) {
    DoubleRootData d;
    d.r = r;
    const Complex g = 2.0 * std::sqrt(Complex((a0 * a1 - 2.0 * b1) / (2.0 * b0)));
    d.gamma = {g, -g};
    d.alpha_tilde = 0.25 + b1 / (2.0 * b0);
    const double bracket = a0 * a0 * a1 * a1 - 24.0 * a0 * a1 * b0 + 8.0 * a0 * a1 * b1 - 24.0 * a0 * a2 * b0 -
                           9.0 * b0 * b0 - 32.0 * b1 * b1 + 24.0 * b0 * b1 + 48.0 * b0 * b2;
    d.c1 = {bracket / (24.0 * b0 * b0 * d.gamma.first), bracket / (24.0 * b0 * b0 * d.gamma.second)};
    out.c_table = {{Complex(1.0), d.c1.first}, {Complex(1.0), d.c1.second}};
    out.double_root = d;
    return out;
  }

  EqualExponentData e;
  e.r = r;
  // r^2 a^2 + (a_1 r - r^2) a + (a_2 r + b_2) = 0
  const Complex qa = r * r;
  const Complex qb = a1 * r - r * r;
  const Complex qc = a2 * r + b2;
  const Complex sq = std::sqrt(qb * qb - 4.0 * qa * qc);
  Complex hi = (-qb + sq) / (2.0 * qa);
  Complex lo = (-qb - sq) / (2.0 * qa);
  if (hi.real() < lo.real()) {
    std::swap(hi, lo);
  }
  e.alpha = {hi, lo};
  const Complex gap = hi - lo;
  constexpr double kGapTolerance = 1e-10;
  const double nearest = std::round(gap.real());
  if (std::abs(gap) <= kGapTolerance * std::max(1.0, std::abs(hi))) {
    e.subcase = EqualExponentData::Subcase::EqualRoots;
  } else if (std::abs(gap.imag()) <= kGapTolerance && nearest >= 1.0 && std::abs(gap.real() - nearest) <= kGapTolerance) {
    e.subcase = EqualExponentData::Subcase::IntegerGap;
    e.log_term = true;
  } else {
    e.subcase = EqualExponentData::Subcase::NonIntegerGap;
  }
  out.c_table = {{Complex(1.0)}, {Complex(1.0)}};
  out.equal_exponent = e;
  return out;
}

Complex birkhoff_adams_ratio(const BirkhoffAdamsData& data, bool plus, double n) {
  const Complex step = (n + 1.0) / n;
  if (data.alpha_pm) {
    const Complex r = plus ? data.r_pm.first : data.r_pm.second;
    const Complex alpha = plus ? data.alpha_pm->first : data.alpha_pm->second;
    const auto& c = plus ? data.c_table.first : data.c_table.second;
    auto series = [&](double m) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        s += c[k] * std::pow(m, -static_cast<double>(k));
      }
      return s;
    };
    return r * std::pow(step, alpha) * series(n + 1.0) / series(n);
  }
  if (data.double_root) {
    const auto& d = *data.double_root;
    const Complex g = plus ? d.gamma.first : d.gamma.second;
    const Complex c1 = plus ? d.c1.first : d.c1.second;
    return d.r * std::exp(g * (std::sqrt(n + 1.0) - std::sqrt(n))) * std::pow(step, d.alpha_tilde) *
           (1.0 + c1 / std::sqrt(n + 1.0)) / (1.0 + c1 / std::sqrt(n));
  }
  const auto& e = *data.equal_exponent;
  return e.r * std::pow(step, plus ? e.alpha.first : e.alpha.second);
}

}  // namespace aim
