#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "aim/analysis.hpp"

namespace aim {

namespace {

constexpr double kTailFloor = 1e-12;
constexpr int kExpansionTerms = 6;

// Quadratic in h through (h[i], v[i]), evaluated at x.
double lagrange3(const std::array<double, 3>& h, const std::array<double, 3>& v, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double w = v[i];
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != i) {
        w *= (x - h[j]) / (h[i] - h[j]);
      }
    }
    sum += w;
  }
  return sum;
}

struct LimitModel {
  double limit;
  double check;  // prediction for the held-out sample t_{N/8}
};

// t_n = q + c n^-beta through t_{N/4}, t_{N/2}, t_N; needs monotone decay.
std::optional<LimitModel> power_model(double t4, double t2, double t1) {
  const double d1 = t2 - t4;
  const double d2 = t1 - t2;
  if (d1 == 0.0 || d2 == 0.0) {
    return std::nullopt;
  }
  const double r = d2 / d1;  // 2^-beta
  if (!(r > 0.0 && r < 1.0)) {
    return std::nullopt;
  }
  const double q = t1 + d2 * r / (1.0 - r);
  return LimitModel{q, q + (t1 - q) / (r * r * r)};
}

// Quadratic in 1/n through the same three samples.
LimitModel inverse_n_model(double n1, double t4, double t2, double t1) {
  const std::array<double, 3> h{1.0 / n1, 2.0 / n1, 4.0 / n1};
  const std::array<double, 3> v{t1, t2, t4};
  return {lagrange3(h, v, 0.0), lagrange3(h, v, 8.0 / n1)};
}

double relative_miss(Complex predicted, double numeric) {
  if (!std::isfinite(numeric)) {
    return std::numeric_limits<double>::infinity();
  }
  const double scale = std::abs(predicted);
  const double miss = std::abs(predicted - numeric);
  return scale == 0.0 ? miss : miss / scale;
}

// Roots of z^2 + b z + c = 0 ordered by decreasing modulus.
std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c) {
  const Complex sq = std::sqrt(b * b - 4.0 * c);
  Complex r1 = (-b + sq) / 2.0;
  Complex r2 = (-b - sq) / 2.0;
  if (std::abs(r1) < std::abs(r2)) {
    std::swap(r1, r2);
  }
  return {r1, r2};
}

void power_law_case(const PowerLaw& law, ClassificationReport& rep) {
  const double d = rep.depth;
  PowerLawPrediction pred;
  const double half_tau = law.tau / 2.0;
  if (law.sigma > half_tau + 1e-12 * std::max(1.0, std::abs(law.sigma))) {
    rep.case_label = CaseLabel::C4a;
    pred.minimal_formula = -(law.b / law.a) * std::pow(d, law.sigma - law.tau);
    pred.minimal_alternative = -(law.b / law.a) * std::pow(d, law.tau - law.sigma);
    pred.dominant_formula = -law.a * std::pow(d, law.sigma);
    pred.dominant_alternative = law.a * std::pow(d, law.sigma);
  } else if (std::abs(law.sigma - half_tau) <= 1e-12 * std::max(1.0, std::abs(law.sigma))) {
    rep.case_label = CaseLabel::C4b;
    const auto formula = quadratic_roots(law.sigma, law.tau);
    pred.minimal_formula = formula.first * std::pow(d, law.tau);
    pred.dominant_formula = formula.second * std::pow(d, law.sigma);
    const auto alt = quadratic_roots(-law.a, -law.b);
    pred.dominant_alternative = alt.first * std::pow(d, law.sigma);
    pred.minimal_alternative = alt.second * std::pow(d, law.sigma);
  } else {
    rep.warnings.push_back("declared power law has sigma < tau/2; no asymptotic case applies");
    return;
  }
  const bool min_alt =
      relative_miss(pred.minimal_alternative, rep.numeric_minimal_ratio) < relative_miss(pred.minimal_formula, rep.numeric_minimal_ratio);
  const bool dom_alt = relative_miss(pred.dominant_alternative, rep.numeric_dominant_ratio) <
                       relative_miss(pred.dominant_formula, rep.numeric_dominant_ratio);
  pred.minimal_selected = min_alt ? "alternative" : "formula";
  pred.dominant_selected = dom_alt ? "alternative" : "formula";
  rep.predicted_minimal_ratio = min_alt ? pred.minimal_alternative : pred.minimal_formula;
  rep.predicted_dominant_ratio = dom_alt ? pred.dominant_alternative : pred.dominant_formula;
  if (min_alt || dom_alt) {
    std::ostringstream os;
    os << "power-law ratio selected by numeric match: minimal " << pred.minimal_selected << ", dominant "
       << pred.dominant_selected;
    rep.warnings.push_back(os.str());
  }
  rep.power_law_prediction = pred;
}

void expansion_case(const std::vector<double>& a, const std::vector<double>& b, ClassificationReport& rep) {
  BirkhoffAdamsData data = birkhoff_adams(a, b, kExpansionTerms);
  if (data.alpha_pm) {
    rep.case_label = CaseLabel::C5a;
  } else if (data.double_root) {
    rep.case_label = CaseLabel::C5b;
  } else {
    switch (data.equal_exponent->subcase) {
      case EqualExponentData::Subcase::NonIntegerGap:
        rep.case_label = CaseLabel::C5c_i;
        break;
      case EqualExponentData::Subcase::IntegerGap:
        rep.case_label = CaseLabel::C5c_ii;
        break;
      case EqualExponentData::Subcase::EqualRoots:
        rep.case_label = CaseLabel::C5c_iii;
        break;
    }
  }
  // Ratio x_d / x_{d-1} is the expansion's x_{m+1} / x_m at m = d - 1.
  const double m = rep.depth - 1.0;
  Complex plus = birkhoff_adams_ratio(data, true, m);
  Complex minus = birkhoff_adams_ratio(data, false, m);
  if (std::abs(plus) < std::abs(minus)) {
    std::swap(plus, minus);
  }
  rep.predicted_dominant_ratio = plus;
  rep.predicted_minimal_ratio = minus;
  rep.ba_data = std::move(data);
}

void monic_case(const std::vector<double>& pvals, const MonicTransform& mt, ClassificationReport& rep) {
  const double scale = std::max(1.0, std::abs(rep.q_limit));
  const double floor = kTailFloor * scale;
  const auto& a = rep.a_n_samples;
  const TailFit fit = fit_tail_exponent(a, 1, floor);
  if (std::abs(rep.q_limit - 1.0) <= kUnitQTolerance) {
    if (fit.decays_faster_than(2.0)) {
      rep.case_label = CaseLabel::C2;
    }
  } else if (rep.q_limit > 1.0) {
    std::vector<double> diff;
    diff.reserve(a.size());
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      diff.push_back(a[i + 1] - a[i]);
    }
    if (fit_tail_exponent(diff, 1, floor).decays_faster_than(1.0)) {
      rep.case_label = CaseLabel::C3;
    }
  } else if (fit.decays_faster_than(1.0)) {
    rep.case_label = CaseLabel::C1b;
  } else if (fit.decays_faster_than(0.5)) {
    rep.case_label = CaseLabel::C1c;
  } else if (fit.decays_faster_than(0.0)) {
    rep.case_label = CaseLabel::C1a;
  }

  // Local roots (p_n / 2)(1 +- sqrt(1 + t_n)). The dominant ratio x_d / x_{d-1}
  // is governed by level d, the minimal one by level d + 1 (x_{d+1} is small).
  const auto d = static_cast<std::size_t>(rep.depth);
  auto local_roots = [&](std::size_t n) {
    const Complex root = std::sqrt(Complex(1.0 + mt.t[n - 1]));
    Complex plus = pvals[n] / 2.0 * (1.0 + root);
    Complex minus = pvals[n] / 2.0 * (1.0 - root);
    if (std::abs(plus) < std::abs(minus)) {
      std::swap(plus, minus);
    }
    return std::pair{plus, minus};
  };
  rep.predicted_dominant_ratio = local_roots(d).first;
  rep.predicted_minimal_ratio = local_roots(d + 1).second;
}

}  // namespace

std::string to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::C1a:
      return "1a";
    case CaseLabel::C1b:
      return "1b";
    case CaseLabel::C1c:
      return "1c";
    case CaseLabel::C2:
      return "2";
    case CaseLabel::C3:
      return "3";
    case CaseLabel::C4a:
      return "4a";
    case CaseLabel::C4b:
      return "4b";
    case CaseLabel::C5a:
      return "5a";
    case CaseLabel::C5b:
      return "5b";
    case CaseLabel::C5c_i:
      return "5c_i";
    case CaseLabel::C5c_ii:
      return "5c_ii";
    case CaseLabel::C5c_iii:
      return "5c_iii";
    case CaseLabel::Unclassified:
      return "Unclassified";
  }
  return "Unclassified";
}

MonicTransform monic_transform(const std::vector<double>& pvals, const std::vector<double>& qvals) {
  if (pvals.size() != qvals.size()) {
    throw Error(ErrorCode::InvalidArgument, "p and q sequences differ in length");
  }
  if (pvals.size() < 9) {
    throw Error(ErrorCode::InsufficientData, "monic transform needs at least 9 levels");
  }
  MonicTransform out;
  out.t.reserve(pvals.size() - 1);
  for (std::size_t n = 1; n < pvals.size(); ++n) {
    const double den = pvals[n - 1] * pvals[n];
    if (den == 0.0) {
      throw Error(ErrorCode::ZeroP, "p_" + std::to_string(n - 1) + " p_" + std::to_string(n) + " = 0");
    }
    out.t.push_back(4.0 * qvals[n] / den);
  }
  const std::size_t N = out.t.size();
  const double last = out.t.back();
  for (std::size_t n = N / 2; n <= N; ++n) {
    out.tail_variation = std::max(out.tail_variation, std::abs(out.t[n - 1] - last));
  }
  out.q_limit = last;
  if (out.tail_variation > 1e-14 * std::max(1.0, std::abs(last))) {
    // Two three-parameter tail models fitted on t_{N/4}, t_{N/2}, t_N; the one
    // that better predicts t_{N/8} wins. It must explain most of the drift
    // from t_{N/8} and stay within ten tail variations of t_N. Oscillating
    // tails (variation not attained at N/2) keep the last value.
    const double t1 = out.t[N - 1];
    const double t2 = out.t[N / 2 - 1];
    const double t4 = out.t[N / 4 - 1];
    const double t8 = out.t[N / 8 - 1];
    std::optional<LimitModel> best;
    double best_miss = 0.1 * std::abs(t8 - t1);
    std::vector<LimitModel> models;
    if (out.tail_variation <= 1.01 * std::abs(t2 - t1)) {
      models.push_back(inverse_n_model(static_cast<double>(N), t4, t2, t1));
      if (auto pm = power_model(t4, t2, t1)) {
        models.push_back(*pm);
      }
    }
    for (const LimitModel& m : models) {
      const double miss = std::abs(m.check - t8);
      if (std::isfinite(m.limit) && miss < best_miss && std::abs(m.limit - t1) <= 10.0 * out.tail_variation) {
        best = m;
        best_miss = miss;
      }
    }
    if (best) {
      out.q_limit = best->limit;
    }
  }
  return out;
}

std::pair<Complex, Complex> characteristic_roots(double q) {
  const Complex root = std::sqrt(Complex(1.0 - q));
  return {1.0 + root, 1.0 - root};
}

TailFit fit_tail_exponent(const std::vector<double>& values, std::size_t first_index, double floor) {
  TailFit out;
  if (values.empty()) {
    out.negligible = true;
    return out;
  }
  const std::size_t start = values.size() / 2;
  // Suffix maximum: a monotone envelope that tolerates sign changes and zeros.
  std::vector<double> envelope(values.size() - start);
  double running = 0.0;
  for (std::size_t i = values.size(); i-- > start;) {
    running = std::max(running, std::abs(values[i]));
    envelope[i - start] = running;
  }
  if (envelope.front() <= floor) {
    out.negligible = true;
    return out;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    const auto n = static_cast<double>(first_index + start + i);
    if (n < 1.0 || envelope[i] <= floor) {
      continue;
    }
    const double x = std::log(n);
    const double y = std::log(envelope[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) {
    return out;
  }
  const double den = count * sxx - sx * sx;
  if (den <= 0.0) {
    return out;
  }
  out.beta = -(count * sxy - sx * sy) / den;
  return out;
}

double forward_dominant_ratio(const std::vector<double>& pvals, const std::vector<double>& qvals, int d,
                              std::uint64_t seed) {
  if (d < 1 || static_cast<std::size_t>(d) >= pvals.size() || pvals.size() != qvals.size()) {
    throw Error(ErrorCode::InvalidArgument, "forward depth " + std::to_string(d) + " outside the sampled range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double older = dist(rng);  // x_{-2}
  double old = dist(rng);    // x_{-1}
  for (int n = 0; n <= d; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double next = pvals[i] * old + qvals[i] * older;
    older = old;
    old = next;
    const double mag = std::max(std::abs(old), std::abs(older));
    if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
      old /= mag;
      older /= mag;
    }
  }
  return old / older;
}

ClassificationReport classify(const std::vector<double>& pvals, const std::vector<double>& qvals,
                              const DeclaredData& declared, std::uint64_t seed) {
  if (pvals.size() != qvals.size()) {
    throw Error(ErrorCode::InvalidArgument, "p and q sequences differ in length");
  }
  if (pvals.size() < kMinClassifyLevels) {
    throw Error(ErrorCode::InsufficientData, std::to_string(pvals.size()) + " levels supplied, at least " +
                                                 std::to_string(kMinClassifyLevels) + " needed");
  }
  ClassificationReport rep;
  rep.seed = seed;
  const MonicTransform mt = monic_transform(pvals, qvals);
  rep.q_limit = mt.q_limit;
  rep.a_n_samples.reserve(mt.t.size());
  for (double t : mt.t) {
    rep.a_n_samples.push_back(t - rep.q_limit);
  }
  rep.roots = characteristic_roots(rep.q_limit);
  rep.depth = std::min(kClassifyDepth, static_cast<int>(pvals.size() - 1) / 2);
  const auto d = static_cast<std::size_t>(rep.depth);

  rep.numeric_dominant_ratio = forward_dominant_ratio(pvals, qvals, rep.depth, seed);
  const std::vector<double> p_tail(pvals.begin() + static_cast<std::ptrdiff_t>(d + 1), pvals.end());
  const std::vector<double> q_tail(qvals.begin() + static_cast<std::ptrdiff_t>(d + 1), qvals.end());
  bool miller_ok = false;
  try {
    rep.numeric_minimal_ratio = miller_minimal_ratio(p_tail, q_tail);
    miller_ok = true;
  } catch (const Error& e) {
    rep.warnings.push_back(std::string("minimal ratio: ") + e.what());
    try {
      rep.numeric_minimal_ratio = backward_ratio(p_tail, q_tail, static_cast<int>(p_tail.size()) - 1);
    } catch (const Error&) {
      rep.numeric_minimal_ratio = std::numeric_limits<double>::quiet_NaN();
    }
  }
  rep.minimal_exists = miller_ok && std::abs(rep.numeric_minimal_ratio) < std::abs(rep.numeric_dominant_ratio);

  if (declared.ba_coeffs) {
    expansion_case(declared.ba_coeffs->first, declared.ba_coeffs->second, rep);
  } else if (declared.power_law) {
    rep.power_law = declared.power_law;
    power_law_case(*declared.power_law, rep);
  } else {
    monic_case(pvals, mt, rep);
  }
  rep.consistency = relative_miss(rep.predicted_dominant_ratio, rep.numeric_dominant_ratio) <= kConsistencyTolerance &&
                    relative_miss(rep.predicted_minimal_ratio, rep.numeric_minimal_ratio) <= kConsistencyTolerance;
  return rep;
}

}  // namespace aim
