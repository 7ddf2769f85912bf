#include <gtest/gtest.h>

#include "carnot/cantor.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::pt;

namespace {

const GroupDescriptor& F23 = GroupDescriptor::f23();

Scalar p8(int e) { return ipow(Scalar(8), e); }

// omega from the binary digits of j - 1 (most significant digit = level 2 choice)
Scalar omega_from_digits(unsigned k, std::uint64_t j) {
  Scalar sum = 0;
  for (unsigned l = 1; l < k; ++l) {
    unsigned bit = static_cast<unsigned>(((j - 1) >> (k - 1 - l)) & 1);
    if (bit) sum += p8(-6 * static_cast<int>(l));
  }
  return -sum;
}

}  // namespace

TEST(CantorLevelsTest, FirstLevels) {
  auto levels = build_levels(3);
  ASSERT_EQ(levels.size(), 3u);
  ASSERT_EQ(levels[0].intervals.size(), 1u);
  EXPECT_EQ(levels[0].intervals[0].a, 0);
  EXPECT_EQ(levels[0].intervals[0].b, 1);
  ASSERT_EQ(levels[1].intervals.size(), 2u);
  EXPECT_EQ(levels[1].intervals[0].b, frac(3, 8));
  EXPECT_EQ(levels[1].intervals[1].a, frac(5, 8));
  EXPECT_EQ(levels[1].intervals[1].b, 1);
  ASSERT_EQ(levels[2].intervals.size(), 4u);
  EXPECT_EQ(levels[2].intervals[0].a, 0);
  EXPECT_EQ(levels[2].intervals[0].b, frac(11, 64));
  EXPECT_EQ(levels[2].intervals[1].a, frac(13, 64));
  EXPECT_EQ(levels[2].intervals[1].b, frac(3, 8));
  EXPECT_THROW(build_levels(0), Error);
}

TEST(CantorLevelsTest, OrderedAndDisjoint) {
  auto levels = build_levels(10);
  for (const CantorLevel& lv : levels) {
    ASSERT_EQ(lv.intervals.size(), std::size_t{1} << (lv.k - 1));
    for (std::size_t j = 0; j < lv.intervals.size(); ++j) {
      ASSERT_LT(lv.intervals[j].a, lv.intervals[j].b);
      if (j + 1 < lv.intervals.size()) ASSERT_LT(lv.intervals[j].b, lv.intervals[j + 1].a);
    }
  }
  // nested: each child lies in its parent
  for (std::size_t k = 1; k < levels.size(); ++k)
    for (std::size_t j = 0; j < levels[k].intervals.size(); ++j) {
      const Interval& parent = levels[k - 1].intervals[j / 2];
      ASSERT_LE(parent.a, levels[k].intervals[j].a);
      ASSERT_LE(levels[k].intervals[j].b, parent.b);
    }
}

TEST(CantorLevelsTest, Locate) {
  CantorLevel lv = build_levels(3).back();
  EXPECT_EQ(lv.locate(0), 0u);
  EXPECT_EQ(lv.locate(frac(11, 64)), 0u);
  EXPECT_FALSE(lv.locate(frac(12, 64)).has_value());
  EXPECT_EQ(lv.locate(frac(13, 64)), 1u);
  EXPECT_FALSE(lv.locate(frac(1, 2)).has_value());
  EXPECT_EQ(lv.locate(1), 3u);
  EXPECT_FALSE(lv.locate(2).has_value());
  EXPECT_FALSE(lv.locate(-1).has_value());
}

TEST(CantorMeasureTest, ExactLengths) {
  EXPECT_EQ(measure(1), 1);
  EXPECT_EQ(measure(2), frac(3, 4));
  EXPECT_EQ(measure(3), frac(11, 16));
  for (unsigned k = 1; k <= 12; ++k) ASSERT_EQ(measure(k), measure_closed_form(k)) << k;
  EXPECT_EQ(measure_limit(), frac(2, 3));
  EXPECT_GE(measure_limit(), frac(2, 3));
  for (unsigned k = 1; k <= 12; ++k) ASSERT_GT(measure(k), measure_limit());
}

TEST(OmegaTest, Examples) {
  Scalar eps3 = frac(1, 4);
  EXPECT_EQ(omega(2, 1, eps3), 0);
  EXPECT_EQ(omega(2, 2, eps3), -p8(-6) * 64);
  EXPECT_EQ(omega_hat(3, 4), -(p8(-6) + p8(-12)));
  for (unsigned k = 1; k <= 20; ++k) ASSERT_EQ(omega_hat(k, 1), 0);
  EXPECT_THROW(omega_hat(3, 5), Error);
  EXPECT_THROW(omega_hat(3, 0), Error);
  EXPECT_THROW(omega(2, 1, 0), Error);
}

TEST(OmegaTest, RecurrenceMatchesDigitOracle) {
  for (unsigned k = 1; k <= 9; ++k)
    for (std::uint64_t j = 1; j <= (std::uint64_t{1} << (k - 1)); ++j)
      ASSERT_EQ(omega_hat(k, j), omega_from_digits(k, j)) << k << " " << j;
  CurveIterate it(9, frac(1, 3));
  for (std::size_t j = 0; j < it.omega_hat().size(); ++j) {
    ASSERT_EQ(it.omega_hat()[j], omega_from_digits(9, j + 1));
    ASSERT_EQ(it.omega(j), omega(9, j + 1, frac(1, 3)));
  }
}

TEST(OmegaTest, SetMembership) {
  EXPECT_TRUE(in_omega_set(1, 0));
  EXPECT_TRUE(in_omega_set(3, -(p8(-6) + p8(-12))));
  EXPECT_FALSE(in_omega_set(2, -p8(-12)));  // needs level 3
  EXPECT_FALSE(in_omega_set(3, p8(-6)));
  EXPECT_FALSE(in_omega_set(3, -2 * p8(-6)));
  for (unsigned k = 2; k <= 8; ++k)
    for (std::uint64_t j = 1; j <= (std::uint64_t{1} << (k - 1)); ++j) ASSERT_TRUE(in_omega_set(k, omega_hat(k, j)));
}

TEST(HolderConstantTest, Values) {
  EXPECT_EQ(holder_constant(2), frac(1, 8));
  EXPECT_EQ(holder_constant(1), 0);
  EXPECT_EQ(holder_constant_limit(), frac(1, 7));
  for (unsigned k = 2; k < 30; ++k) {
    ASSERT_LT(holder_constant(k), holder_constant(k + 1));
    ASSERT_LT(holder_constant(k), frac(1, 7));
  }
  EXPECT_LT(frac(1, 7) - holder_constant(30), p8(-29));
}

TEST(GammaTest, Iterates) {
  Scalar eps3 = frac(1, 4);
  EXPECT_EQ(gamma_k(frac(1, 3), 1, eps3), pt(F23, {"0", "1/3", "0", "0", "0"}));
  EXPECT_EQ(gamma_k(frac(3, 4), 2, eps3), GroupPoint(F23, {0, frac(3, 4), 0, -p8(-6) * 64, 0}));
  EXPECT_EQ(gamma_k(frac(1, 4), 2, eps3), GroupPoint(F23, {0, frac(1, 4), 0, 0, 0}));
  CantorLevel l3 = build_levels(3).back();
  Scalar t = l3.intervals[3].center();
  EXPECT_EQ(gamma_k(t, 3, eps3)[3], omega(3, 4, eps3));
  try {
    gamma_k(frac(1, 2), 2, eps3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain);
    EXPECT_NE(std::string(e.what()).find("(3/8, 5/8)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(gamma_k(frac(3, 2), 2, eps3), Error);
}

TEST(GammaTest, LimitPoints) {
  Scalar eps3 = frac(1, 4);
  LimitValue left = gamma_limit(CantorPoint::left_end(), 6, eps3);
  EXPECT_EQ(left.exact_gamma4, 0);
  EXPECT_EQ(left.point, identity(F23));

  LimitValue right = gamma_limit(CantorPoint::right_end(), 3, eps3);
  EXPECT_EQ(right.point[1], 1);
  EXPECT_EQ(right.point[3], -(p8(-6) + p8(-12)) * 64);
  EXPECT_EQ(right.error_bound, p8(-18) / (1 - p8(-6)) * 64);
  EXPECT_LE(abs(right.exact_gamma4 - right.point[3]), right.error_bound);
  EXPECT_EQ(right.exact_gamma4, -p8(-6) / (1 - p8(-6)) * 64);

  CantorPoint mixed{{1, 0, 1, 1, 0}, 1};
  EXPECT_EQ(mixed.index(3), 2u);  // digits 1, 0
  EXPECT_EQ(mixed.index(8), 0b1011011u);
  for (unsigned k = 1; k <= 12; ++k) {
    LimitValue v = gamma_limit(mixed, k, eps3);
    ASSERT_LE(abs(v.exact_gamma4 - v.point[3]), v.error_bound);
    CantorLevel lv = build_levels(k).back();
    ASSERT_TRUE(lv.intervals[mixed.index(k)].contains(mixed.value()));
    ASSERT_EQ(v.point, gamma_k(mixed.value(), k, eps3));
  }
}

TEST(GammaTest, AddressBijection) {
  const unsigned k = 7;
  CantorLevel lv = build_levels(k).back();
  for (std::uint64_t j = 0; j < lv.intervals.size(); ++j) {
    CantorPoint p;
    for (unsigned i = 0; i + 1 < k; ++i) p.digits.push_back(static_cast<std::uint8_t>((j >> (k - 2 - i)) & 1));
    ASSERT_EQ(p.index(k), j);
    p.tail = 0;
    ASSERT_EQ(p.value(), lv.intervals[j].a);
    p.tail = 1;
    ASSERT_EQ(p.value(), lv.intervals[j].b);
  }
}

TEST(GammaTest, StrictlyDecreasingOnLimitSet) {
  Scalar eps3 = frac(1, 4);
  std::vector<CantorPoint> pts;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int tail = 0; tail < 2; ++tail) pts.push_back({{std::uint8_t(a), std::uint8_t(b), std::uint8_t(c)}, std::uint8_t(tail)});
  for (const auto& s : pts)
    for (const auto& t : pts) {
      if (!(s.value() < t.value())) continue;
      ASSERT_GT(gamma_limit(s, 1, eps3).exact_gamma4, gamma_limit(t, 1, eps3).exact_gamma4);
    }
}

TEST(VerifyIterateTest, PassesAtDefaultDepth) {
  MetricParams p;
  for (unsigned k = 2; k <= 8; ++k) {
    CurveReport r = verify_iterate(k, p);
    ASSERT_TRUE(r.pass()) << k << (r.violations.empty() ? "" : r.violations[0].check + " " + r.violations[0].detail);
    ASSERT_EQ(r.checks.size(), 6u);
    for (const CurveCheck& c : r.checks) {
      EXPECT_GT(c.checked, 0u) << c.name;
      EXPECT_LE(c.worst_ratio, 1.0) << c.name;
    }
  }
  EXPECT_THROW(verify_iterate(1, p), Error);
}

TEST(VerifyIterateTest, Eps3Covariance) {
  MetricParams p1, p2;
  p2.eps3 = frac(2, 7);
  CurveIterate a(6, p1.eps3), b(6, p2.eps3);
  for (std::size_t j = 0; j < a.omega_hat().size(); ++j) {
    // eps3^3 omega is eps-free
    ASSERT_EQ(a.omega(j) * pow(p1.eps3, 3), b.omega(j) * pow(p2.eps3, 3));
  }
  CurveReport r1 = verify_iterate(6, p1), r2 = verify_iterate(6, p2);
  ASSERT_EQ(r1.checks.size(), r2.checks.size());
  for (std::size_t i = 0; i < r1.checks.size(); ++i) {
    EXPECT_EQ(r1.checks[i].pass, r2.checks[i].pass);
    EXPECT_EQ(r1.checks[i].worst_ratio, r2.checks[i].worst_ratio) << r1.checks[i].name;
  }
}

TEST(VerifyIterateTest, DeterministicAcrossWorkers) {
  MetricParams p;
  CurveReport a = verify_iterate(6, p, 1), b = verify_iterate(6, p, 4);
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].checked, b.checks[i].checked);
    EXPECT_EQ(a.checks[i].worst_ratio, b.checks[i].worst_ratio);
  }
}

TEST(VerifyIterateTest, IsometryFailsForTinyEps1) {
  // with eps1 below c(k) the third layer dominates some pairs
  MetricParams p;
  p.eps1 = frac(1, 1000);
  CurveReport r = verify_iterate(4, p);
  EXPECT_FALSE(r.pass());
  bool e_failed = false;
  for (const CurveCheck& c : r.checks)
    if (c.name == "e") e_failed = !c.pass;
    else EXPECT_TRUE(c.pass) << c.name;
  EXPECT_TRUE(e_failed);
  EXPECT_FALSE(r.violations.empty());
  EXPECT_LE(r.violations.size(), 20u);
}
