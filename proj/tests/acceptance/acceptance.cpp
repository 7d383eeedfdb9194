// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aim/aim_core.hpp"
#include "aim/analysis.hpp"
#include "aim/birkhoff_adams.hpp"
#include "aim/cf_engine.hpp"
#include "aim/cli/commands.hpp"
#include "aim/cli/problem_file.hpp"
#include "aim/reconstruct.hpp"

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<double> constant(double v, std::size_t n) { return std::vector<double>(n, v); }

double max_abs_upto(const aim::TaylorSeries& s, int order) {
  double m = 0.0;
  for (int k = 0; k <= std::min(order, s.order()); ++k) m = std::max(m, std::abs(s[static_cast<std::size_t>(k)]));
  return m;
}

// Random (p_n, q_n) in [0.5, 2], 31 levels each.
std::vector<std::pair<std::vector<double>, std::vector<double>>> random_corpus() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(31), q(31);
    for (double& v : p) v = dist(rng);
    for (double& v : q) v = dist(rng);
    out.emplace_back(std::move(p), std::move(q));
  }
  return out;
}

void spectrum(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  const aim::cli::ProblemFile problem = aim::cli::parse_problem_text(R"({
    "lambda0": "2*x", "s0": "1 - E", "parameter": "E", "x0": 0, "order": 80, "n_max": 40,
    "search": {"e_min": 0, "e_max": 12, "grid": 241, "tol": 1e-12}})");
  const auto result = aim::cli::cmd_solve(problem, aim::cli::Flags{});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& eig = result.record["outputs"]["eigenvalues"];
  v.require(eig.size() == 6, "six eigenvalues");
  double worst = 0.0;
  for (std::size_t k = 0; k < eig.size() && k < 6; ++k) {
    worst = std::max(worst, std::abs(eig[k]["value"].get<double>() - (2.0 * static_cast<double>(k) + 1.0)));
  }
  v.require(worst < 1e-8, "each within 1e-8");
  v.require(seconds < 10.0, "runtime under 10 s");
  v.detail << "count " << eig.size() << ", max error " << worst << ", " << seconds << " s";
}

void termination(Verdict& v) {
  const auto spec = aim::ProblemSpec::from_strings("2*x", "1 - E", "E", 0.0, 80, 40);
  double worst = 0.0;
  for (int k = 0; k <= 2; ++k) {
    const double E = 2.0 * k + 1.0;
    const auto seqs = aim::aim_iterate(spec, E);
    for (int n = k + 1; n <= seqs.depth(); ++n) worst = std::max(worst, aim::relative_delta(seqs, n));
    const auto level = aim::detect_termination(aim::pq_iterate(spec, E));
    v.require(level.has_value() && *level == k, "termination level at E = " + std::to_string(E));
  }
  v.require(worst < 1e-12, "relative delta below 1e-12");
  v.detail << "max relative delta " << worst;
}

void fixed_points(Verdict& v) {
  const auto a = aim::cf_approximants(constant(3, 41), constant(4, 41), 40);
  const double ea = std::abs(*a.approximant(40) - 1.0);
  const auto b = aim::cf_approximants(constant(1, 51), constant(1, 51), 50);
  const double eb = std::abs(*b.approximant(50) - (std::sqrt(5.0) - 1.0) / 2.0);
  v.require(ea < 1e-12, "K(4/3) at n = 40");
  v.require(eb < 1e-10, "K(1/1) at n = 50");
  v.detail << "K(4/3) error " << ea << ", K(1/1) error " << eb;
}

void determinants(Verdict& v) {
  double worst = 0.0;
  for (const auto& [p, q] : random_corpus()) {
    worst = std::max(worst, aim::cf_determinants(aim::cf_approximants(p, q, 30)).max_rel_error);
  }
  v.require(worst < 1e-12, "max relative error below 1e-12");
  v.detail << "100 sequences, max relative error " << worst;
}

void partial_sums(Verdict& v) {
  double worst = 0.0;
  for (const auto& [p, q] : random_corpus()) {
    const auto st = aim::cf_approximants(p, q, 30);
    const auto sums = aim::alpha_partial_sums(st);
    for (std::size_t n = 0; n < sums.size(); ++n) {
      const double c = *st.approximant(static_cast<int>(n));
      worst = std::max(worst, std::abs(sums[n] - c) / std::abs(c));
    }
  }
  v.require(worst < 1e-12, "relative agreement 1e-12");
  v.detail << "max relative error " << worst;
}

void stern_seidel_both_ways(Verdict& v) {
  const auto ones = constant(1, 201);
  const auto unit = aim::stern_seidel(ones);
  const auto unit_cf = aim::cf_approximants(ones, ones, 200);
  const double cauchy = std::abs(*unit_cf.approximant(200) - *unit_cf.approximant(150));
  v.require(unit.verdict == aim::ConvergenceReport::Verdict::Converges, "p_n = 1 converges");
  v.require(cauchy < 1e-14, "p_n = 1 approximants Cauchy");

  std::vector<double> geo(51);
  for (std::size_t n = 0; n < geo.size(); ++n) geo[n] = std::ldexp(1.0, -static_cast<int>(n));
  const auto rep = aim::stern_seidel(geo);
  const auto geo_cf = aim::cf_approximants(geo, constant(1, 51), 50);
  const double gap = std::abs(*geo_cf.approximant(50) - *geo_cf.approximant(49));
  v.require(rep.verdict == aim::ConvergenceReport::Verdict::Diverges, "p_n = 2^-n diverges");
  v.require(gap > 1e-3, "even/odd gap above 1e-3 at n = 50");

  // denominator bound on the two cases and a random positive corpus
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(0.01, 3.0);
  std::vector<aim::CFState> states{unit_cf, geo_cf};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(51);
    for (double& x : p) x = dist(rng);
    states.push_back(aim::cf_approximants(p, constant(1, 51), 50));
  }
  int rows = 0, violations = 0, ties = 0;
  for (const auto& st : states) {
    for (const auto& r : aim::denominator_bound_check(st)) {
      ++rows;
      if (!r.pass) ++violations;
      if (r.lhs == r.rhs) ++ties;
    }
  }
  v.require(violations == 0, "denominator bound");
  v.detail << "Cauchy gap " << cauchy << ", even/odd gap " << gap << ", bound rows " << rows << " violations "
           << violations << " (equality rows " << ties << ")";
}

void difference_bound(Verdict& v) {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> dist(1.0, 6.0);
  int rows = 0, violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(51);
    for (double& x : p) x = dist(rng);
    if (trial == 0) std::fill(p.begin(), p.end(), 1.0);
    for (const auto& r : aim::bound_check(aim::cf_approximants(p, constant(1, 51), 50))) {
      ++rows;
      if (!r.pass) ++violations;
    }
  }
  v.require(violations == 0, "zero violations");
  v.detail << rows << " rows, " << violations << " violations";
}

void pincherle(Verdict& v) {
  double worst = 0.0;
  for (const auto& [p, q] : std::vector<std::pair<double, double>>{{3, 4}, {1, 1}, {2, 0.75}, {5, -1}}) {
    worst = std::max(worst, aim::pincherle_check(constant(p, 401), constant(q, 401)).agreement);
  }
  std::vector<double> bp, bq;
  for (int n = 0; n < 401; ++n) {
    bp.push_back(2.0 * (n + 1));
    bq.push_back(-1.0);
  }
  const auto bessel = aim::pincherle_check(bp, bq);
  worst = std::max(worst, bessel.agreement);
  v.require(worst < 1e-10, "agreement below 1e-10");
  v.detail << "max |cf_limit + backward ratio| " << worst << ", Bessel backward ratio " << bessel.backward_ratio;
}

void riccati(Verdict& v) {
  // centers away from the Hermite zeros, where the series of alpha = -y'/y stay O(1)
  double ric = 0.0, fac = 0.0, ode = 0.0;
  int problems = 0;
  for (double x0 : {0.0, 3.0}) {
    for (int k = 0; k <= 3; ++k) {
      if (x0 == 0.0 && k % 2 == 1) continue;  // pole of alpha at the center
      const double E = 2.0 * k + 1.0;
      const auto spec = aim::ProblemSpec::from_strings("2*x", "1 - E", "E", x0, 40, 30);
      const auto pq = aim::pq_iterate(spec, E);
      v.require(aim::detect_termination(pq).has_value(), "terminating problem");
      const auto alpha = aim::alpha_from_ladder(pq);
      const auto res = aim::riccati_residual(alpha, spec, E);
      const auto f = aim::factorization_residual(alpha, spec, E);
      ric = std::max(ric, max_abs_upto(res, 20));
      for (int j = 0; j <= res.order(); ++j) {
        const auto i = static_cast<std::size_t>(j);
        fac = std::max(fac, std::abs(f[i] + res[i]));
      }
      const auto y = aim::build_solution(alpha, spec, E, 0.7, -1.3);
      ode = std::max(ode, max_abs_upto(aim::ode_residual(y, spec, E), 20));
      ++problems;
    }
  }
  v.require(ric < 1e-10, "Riccati residual below 1e-10");
  v.require(fac < 1e-13, "factorization = -Riccati to rounding");
  v.require(ode < 1e-8, "ODE residual below 1e-8");
  v.detail << problems << " problems, Riccati " << ric << ", factorization sum " << fac << ", ODE " << ode;
}

void cross_form(Verdict& v) {
  double worst = 0.0;
  for (double E : {1.0, 2.5, 7.3}) {
    const auto spec = aim::ProblemSpec::from_strings("2*x", "1 - E", "E", 0.0, 80, 40);
    const auto table = aim::aim_matrix_iterate(spec, E, 40);
    const auto seqs = aim::aim_iterate(spec, E);
    for (int n = 0; n <= 40; ++n) {
      for (int m = 0; m + n <= 60; ++m) {
        const auto mi = static_cast<std::size_t>(m);
        const double l = seqs.lambda[static_cast<std::size_t>(n)][mi];
        const double s = seqs.s[static_cast<std::size_t>(n)][mi];
        const auto& c = table.at(m, n);
        worst = std::max(worst, std::abs(c[0] - l) / std::max(1.0, std::abs(l)));
        worst = std::max(worst, std::abs(c[1] - s) / std::max(1.0, std::abs(s)));
      }
    }
  }
  v.require(worst < 1e-13, "within 1e-13");
  v.detail << "max relative difference " << worst;
}

void classifier(Verdict& v) {
  const auto c = aim::classify(constant(3, 401), constant(4, 401));
  v.require(c.case_label == aim::CaseLabel::C3, "constants label 3");
  v.require(std::abs(c.numeric_dominant_ratio - 4.0) < 1e-8, "dominant ratio 4");
  v.require(std::abs(c.numeric_minimal_ratio + 1.0) < 1e-8, "minimal ratio -1");

  std::vector<double> bp, bq;
  for (int n = 0; n < 401; ++n) {
    bp.push_back(2.0 * (n + 1));
    bq.push_back(-1.0);
  }
  aim::DeclaredData declared;
  declared.power_law = aim::PowerLaw{2.0, 1.0, -1.0, 0.0};
  const auto b = aim::classify(bp, bq, declared);
  v.require(b.case_label == aim::CaseLabel::C4a, "Bessel label 4a");
  // the minimal ratio J_d / J_{d-1} decays like 1/(2d); compare two depths
  const double shallow = aim::miller_minimal_ratio(std::vector<double>(bp.begin() + 100, bp.end()),
                                                   std::vector<double>(bq.begin() + 100, bq.end()));
  const bool decaying = std::abs(b.numeric_minimal_ratio) < 0.6 * std::abs(shallow) &&
                        std::abs(b.numeric_minimal_ratio * 2.0 * b.depth - 1.0) < 0.05;
  v.require(decaying, "Bessel minimal ratio decays like 1/(2d)");
  v.require(b.power_law_prediction.has_value() && !b.power_law_prediction->minimal_selected.empty(),
            "selected exponent recorded");

  const auto ba = aim::birkhoff_adams({-3, 0, 0}, {-4, 0, 0}, 10);
  double c_max = 0.0;
  for (std::size_t k = 1; k < ba.c_table.first.size(); ++k) {
    c_max = std::max({c_max, std::abs(ba.c_table.first[k]), std::abs(ba.c_table.second[k])});
  }
  v.require(std::abs(ba.r_pm.first - aim::Complex(4.0)) < 1e-15 && std::abs(ba.r_pm.second - aim::Complex(-1.0)) < 1e-15,
            "roots 4 and -1");
  v.require(c_max < 1e-12, "c_k below 1e-12 for k >= 1");
  v.detail << "ratios " << c.numeric_dominant_ratio << ", " << c.numeric_minimal_ratio << "; Bessel minimal "
           << b.numeric_minimal_ratio << " at depth " << b.depth << " vs " << shallow << " at 100, selected "
           << (b.power_law_prediction ? b.power_law_prediction->minimal_selected : "none") << "; max c_k " << c_max;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria = {
      {"harmonic-oscillator spectrum", spectrum},
      {"exact termination", termination},
      {"continued-fraction fixed points", fixed_points},
      {"determinant identity", determinants},
      {"partial sums equal approximants", partial_sums},
      {"convergence test both directions", stern_seidel_both_ways},
      {"approximant difference bound", difference_bound},
      {"Pincherle relation", pincherle},
      {"Riccati and factorization residuals", riccati},
      {"coefficient table matches ladder", cross_form},
      {"classifier cross-checks", classifier},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
