#include <gtest/gtest.h>

#include <cmath>

#include "aim/analysis.hpp"
#include "test_util.hpp"

using aim::ErrorCode;
using aim::test::code_of;

namespace {

std::vector<double> constant(double v, std::size_t n) { return std::vector<double>(n, v); }

struct Recurrence {
  std::vector<double> p;
  std::vector<double> q;
};

// p_n = 2(n+1)/z, q_n = -1: backward ratios of Bessel functions J_n(z).
Recurrence bessel(double z, std::size_t len) {
  Recurrence r;
  for (std::size_t n = 0; n < len; ++n) {
    r.p.push_back(2.0 * static_cast<double>(n + 1) / z);
    r.q.push_back(-1.0);
  }
  return r;
}

}  // namespace

TEST(Miller, ConstantCoefficientRoots) {
  EXPECT_NEAR(aim::miller_minimal_ratio(constant(3, 401), constant(4, 401)), -1.0, 1e-12);
  EXPECT_NEAR(aim::miller_minimal_ratio(constant(1, 401), constant(1, 401)), (1.0 - std::sqrt(5.0)) / 2.0, 1e-12);
}

TEST(Miller, ZeroQAndShortSchedules) {
  auto q = constant(1, 101);
  q[40] = 0.0;
  EXPECT_EQ(code_of([&] { (void)aim::miller_minimal_ratio(constant(1, 101), q); }), ErrorCode::ZeroQ);
  EXPECT_EQ(code_of([] { (void)aim::miller_minimal_ratio(constant(1, 101), constant(1, 101), {50}); }),
            ErrorCode::InsufficientData);
}

TEST(Miller, NoMinimalSolutionFailsToStabilise) {
  // roots e^{+-i}: both solutions have modulus one and the backward ratios keep rotating
  EXPECT_EQ(code_of([] { (void)aim::miller_minimal_ratio(constant(2.0 * std::cos(1.0), 401), constant(-1, 401)); }),
            ErrorCode::NoConvergence);
  // x_n = -x_{n-2} started from (0, 1) lands on zero at index -2
  EXPECT_EQ(code_of([] { (void)aim::backward_ratio(constant(0, 401), constant(-1, 401), 16); }),
            ErrorCode::ZeroDenominator);
}

TEST(Miller, DefaultScheduleEndsAtLength) {
  EXPECT_EQ(aim::default_depth_schedule(101), (std::vector<int>{16, 32, 64, 100}));
  EXPECT_EQ(aim::default_depth_schedule(129), (std::vector<int>{16, 32, 64, 128}));
}

TEST(Pincherle, ConstantCases) {
  const auto a = aim::pincherle_check(constant(3, 401), constant(4, 401));
  EXPECT_NEAR(a.cf_limit, 1.0, 1e-12);
  EXPECT_NEAR(a.backward_ratio, -1.0, 1e-12);
  EXPECT_EQ(a.relation_sign, -1);
  EXPECT_LT(a.agreement, 1e-10);
  const auto b = aim::pincherle_check(constant(1, 401), constant(1, 401));
  EXPECT_NEAR(b.cf_limit, 0.6180339887498949, 1e-12);
  EXPECT_NEAR(b.backward_ratio, -0.6180339887498949, 1e-12);
  EXPECT_LT(b.agreement, 1e-10);
}

TEST(Pincherle, BesselCase) {
  const auto r = bessel(1.0, 401);
  const auto res = aim::pincherle_check(r.p, r.q);
  EXPECT_LT(res.agreement, 1e-10);
  EXPECT_EQ(res.relation_sign, -1);
  // J_1(1) / J_0(1)
  EXPECT_NEAR(res.backward_ratio, 0.5750809150043059, 1e-13);
  // independent brute-force check at fixed depth 200
  EXPECT_NEAR(res.cf_limit, -aim::backward_ratio(r.p, r.q, 200), 1e-10);
}

// Property: cf_limit = -backward_ratio on a family of constant-coefficient recurrences.
TEST(PincherleProperty, RelationOnConstantFamily) {
  for (double p : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    for (double q : {0.25, 1.0, 4.0, -0.1}) {
      if (p * p + 4 * q <= 0) continue;
      const auto res = aim::pincherle_check(constant(p, 401), constant(q, 401));
      EXPECT_LT(res.agreement, 1e-10 * std::max(1.0, std::abs(res.cf_limit))) << p << " " << q;
      const double minimal_root = (p - std::sqrt(p * p + 4 * q)) / 2;
      EXPECT_NEAR(res.backward_ratio, minimal_root, 1e-10);
    }
  }
}

// Property: Bessel-type recurrences at several z obey the relation.
TEST(PincherleProperty, RelationOnBesselFamily) {
  for (double z : {0.5, 1.0, 2.0, 5.0}) {
    const auto r = bessel(z, 401);
    const auto res = aim::pincherle_check(r.p, r.q);
    EXPECT_LT(res.agreement, 1e-10 * std::max(1.0, std::abs(res.cf_limit))) << z;
  }
}
