#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "carnot/cantor.hpp"
#include "carnot/dynamics.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::pt;
using carnot::testing::random_point;
using carnot::testing::random_rational;

namespace {

const GroupDescriptor& F23 = GroupDescriptor::f23();
const GroupDescriptor& ENGEL = GroupDescriptor::engel();

ConeSpec x2_cone(const GroupDescriptor& g, Scalar sigma) { return ConeSpec(AlgebraVector::basis(g, 1), sigma); }

}  // namespace

TEST(VectorFieldTest, FrameAtIdentity) {
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    auto m = vf_matrix(identity(*g));
    for (std::size_t i = 0; i < g->dimension(); ++i) {
      EXPECT_EQ(m[i][0], i == 0 ? 1 : 0);
      EXPECT_EQ(m[i][1], i == 1 ? 1 : 0);
    }
  }
}

TEST(VectorFieldTest, ClosedFormColumns) {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 50; ++n) {
    GroupPoint x = random_point(F23, rng);
    auto m = vf_matrix(x);
    std::vector<Scalar> col2{0, 1, -x[0], x[0] * x[0] / 2, x[0] * x[1]};
    for (std::size_t i = 0; i < 5; ++i) {
      ASSERT_EQ(m[i][0], i == 0 ? 1 : 0);
      ASSERT_EQ(m[i][1], col2[i]);
    }
    GroupPoint y = random_point(ENGEL, rng);
    auto me = vf_matrix(y);
    std::vector<Scalar> e2{0, 1, y[0], y[0] * y[0] / 2};
    for (std::size_t i = 0; i < 4; ++i) {
      ASSERT_EQ(me[i][0], i == 0 ? 1 : 0);
      ASSERT_EQ(me[i][1], e2[i]);
    }
  }
}

TEST(FlowTest, Examples) {
  Scalar t = frac(7, 3);
  EXPECT_EQ(flow_constant(identity(F23), AlgebraVector::basis(F23, 1), t), pt(F23, {"0", "7/3", "0", "0", "0"}));
  EXPECT_EQ(flow_constant(identity(F23), horizontal(F23, 1, 1), 1), pt(F23, {"1", "1", "-1/2", "1/6", "1/3"}));
  EXPECT_THROW(flow_constant(identity(F23), AlgebraVector::basis(F23, 2), 1), Error);
}

TEST(FlowTest, OneParameterLaw) {
  std::mt19937_64 rng(42);
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    for (int n = 0; n < 100; ++n) {
      GroupPoint x = random_point(*g, rng);
      AlgebraVector h = horizontal(*g, random_rational(rng), random_rational(rng));
      Scalar s = random_rational(rng), s2 = random_rational(rng);
      ASSERT_EQ(flow_constant(flow_constant(x, h, s), h, s2), flow_constant(x, h, s + s2));
    }
  }
}

TEST(IntegrateTest, Segments) {
  ControlCurve c{{0, 1, 2}, {AlgebraVector::basis(F23, 1), AlgebraVector::basis(F23, 0)}, identity(F23)};
  Polyline p = integrate(c);
  ASSERT_EQ(p.x.size(), 3u);
  EXPECT_EQ(p.x.back(), pt(F23, {"1", "1", "0", "0", "0"}));
  ControlCurve single{{0, frac(5, 2)}, {horizontal(F23, 1, 2)}, identity(F23)};
  EXPECT_EQ(integrate(single).x.back(), flow_constant(identity(F23), horizontal(F23, 1, 2), frac(5, 2)));
  Polyline fine = integrate(c, 3);
  ASSERT_EQ(fine.x.size(), 9u);
  for (std::size_t i = 0; i < fine.t.size(); ++i) ASSERT_EQ(fine.x[i], c.at(fine.t[i]));
  for (std::size_t i = 0; i + 1 < fine.t.size(); ++i) ASSERT_LT(fine.t[i], fine.t[i + 1]);
}

TEST(IntegrateTest, RejectsMalformedCurves) {
  ControlCurve empty{{0}, {}, identity(F23)};
  EXPECT_THROW(integrate(empty), Error);
  ControlCurve back{{0, 0}, {AlgebraVector::basis(F23, 1)}, identity(F23)};
  EXPECT_THROW(integrate(back), Error);
  ControlCurve vertical{{0, 1}, {AlgebraVector::basis(F23, 2)}, identity(F23)};
  EXPECT_THROW(integrate(vertical), Error);
  ControlCurve c{{0, 1}, {AlgebraVector::basis(F23, 1)}, identity(F23)};
  EXPECT_THROW(c.at(2), Error);
}

TEST(IntegrateTest, AgreesWithRk4) {
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      ControlCurve c = sample_cone_curve(x2_cone(*g, frac(3, 4)), 5, seed);
      Polyline exact = integrate(c);
      auto approx = integrate_rk4(c, 64);
      ASSERT_EQ(approx.size(), exact.x.size());
      for (std::size_t i = 0; i < approx.size(); ++i)
        for (std::size_t j = 0; j < g->dimension(); ++j) {
          double v = to_double(exact.x[i][j]);
          ASSERT_NEAR(approx[i][j], v, 1e-8 * std::max(1.0, std::abs(v))) << seed << " " << i << " " << j;
        }
    }
  }
}

TEST(IntegrateTest, LeftInvariant) {
  std::mt19937_64 rng(43);
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      ControlCurve c = sample_cone_curve(ConeSpec(horizontal(*g, frac(3, 5), frac(-4, 5)), frac(1, 2)), 6, seed);
      c.start = random_point(*g, rng);
      GroupPoint z = random_point(*g, rng);
      ControlCurve moved = c;
      moved.start = z * c.start;
      Polyline a = integrate(c, 1), b = integrate(moved, 1);
      for (std::size_t i = 0; i < a.x.size(); ++i) ASSERT_EQ(b.x[i], z * a.x[i]);
    }
  }
}

TEST(ReachabilityTest, ConeFlowsStayInClosure) {
  std::size_t flows = 0;
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    for (Scalar sigma : {frac(1, 4), frac(1, 2), frac(3, 4)}) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ControlCurve c = sample_cone_curve(x2_cone(*g, sigma), 20, seed);
        Polyline p = integrate(c);
        ASSERT_TRUE(in_semigroup_closure(p.x.back())) << g->name() << " " << seed;
        // semigroup law: later points lie in the translated closure of earlier ones
        for (std::size_t i = 0; i < p.x.size(); i += 4)
          for (std::size_t j = i; j < p.x.size(); j += 3) ASSERT_TRUE(in_translated_constraint(p.x[i], p.x[j]));
        ++flows;
      }
    }
  }
  EXPECT_EQ(flows, 120u);
}

TEST(ReachabilityTest, OutsideConeCanLeaveClosure) {
  // X1 moves stay on the boundary (x1 is free); a backward X2 move leaves
  ControlCurve sideways{{0, 1, 2, 4},
                        {AlgebraVector::basis(F23, 0), AlgebraVector::basis(F23, 1), -AlgebraVector::basis(F23, 0)},
                        identity(F23)};
  GroupPoint end = integrate(sideways).x.back();
  EXPECT_EQ(end, pt(F23, {"-1", "1", "-1", "1/2", "1/2"}));
  EXPECT_EQ(semigroup_closure_terms(end)[1], 0);
  ControlCurve back{{0, 1, 3}, {AlgebraVector::basis(F23, 1), -AlgebraVector::basis(F23, 1)}, identity(F23)};
  EXPECT_FALSE(in_semigroup_closure(integrate(back).x.back()));
}

TEST(PansuTest, SubgroupAndPlateau) {
  auto eta = [](const Scalar& t) { return GroupPoint::basis(F23, 1, t); };
  for (int m = 1; m <= 10; ++m) {
    Scalar s = ipow(Scalar(2), -m);
    ASSERT_EQ(pansu_quotient(eta, frac(1, 3), s), pt(F23, {"0", "1", "0", "0", "0"}));
    ASSERT_EQ(pansu_quotient(eta, frac(1, 3), -s), pt(F23, {"0", "1", "0", "0", "0"}));
  }
  CurveIterate gamma(5, frac(1, 4));
  auto f = [&](const Scalar& t) { return gamma(t); };
  const Interval& plateau = gamma.level().intervals[5];
  Scalar t = plateau.a;
  for (int m = 1; m <= 20; ++m) {
    Scalar s = ipow(Scalar(2), -m);
    if (!plateau.contains(t + s)) continue;
    ASSERT_EQ(pansu_quotient(f, t, s), pt(F23, {"0", "1", "0", "0", "0"}));
  }
  EXPECT_THROW(pansu_quotient(eta, 0, 0), Error);
}

TEST(PansuTest, ControlCurveInterior) {
  ControlCurve c = sample_cone_curve(x2_cone(F23, frac(1, 2)), 4, 7);
  auto f = [&](const Scalar& t) { return c.at(t); };
  for (std::size_t seg = 0; seg < c.segments(); ++seg) {
    Scalar t = (c.breakpoints[seg] + c.breakpoints[seg + 1]) / 2;
    Scalar room = c.breakpoints[seg + 1] - t;
    for (int m = 1; m <= 12; ++m) {
      Scalar s = ipow(Scalar(2), -m);
      if (s >= room) continue;
      // exp(s h) dilated back is exp(h): first-type coordinates are exactly h
      ASSERT_EQ(log_c2(pansu_quotient(f, t, s)), c.controls[seg]);
    }
  }
}

TEST(PansuTest, SwitchPointIsSelfSimilar) {
  ControlCurve c{{0, 1, 2}, {AlgebraVector::basis(F23, 1), horizontal(F23, frac(1, 2), 1)}, identity(F23)};
  auto f = [&](const Scalar& t) { return c.at(t); };
  // the window [1 - s/2, 1 + s/2] is a dilated copy of itself: no limit at the switch
  GroupPoint first = pansu_quotient(f, frac(1, 2), 1);
  AlgebraVector q = log_c2(first);
  EXPECT_EQ(q[0], frac(1, 4));
  EXPECT_EQ(q[1], 1);
  EXPECT_NE(q[2], 0);
  for (int m = 1; m <= 10; ++m) {
    Scalar s = ipow(Scalar(2), -m);
    ASSERT_EQ(pansu_quotient(f, 1 - s / 2, s), first);
  }
  // a fixed time before the switch sees the exact control once s fits in the segment
  Scalar t = 1 - frac(1, 64);
  for (int m = 1; m <= 10; ++m) {
    Scalar s = ipow(Scalar(2), -m);
    AlgebraVector v = log_c2(pansu_quotient(f, t, s));
    if (s <= frac(1, 64))
      ASSERT_EQ(v, AlgebraVector::basis(F23, 1));
    else
      ASSERT_NE(v, AlgebraVector::basis(F23, 1));
  }
}

TEST(SamplerTest, Deterministic) {
  ConeSpec c(horizontal(F23, frac(5, 13), frac(12, 13)), frac(1, 2));
  ControlCurve a = sample_cone_curve(c, 10, 99), b = sample_cone_curve(c, 10, 99), d = sample_cone_curve(c, 10, 100);
  EXPECT_EQ(a.breakpoints, b.breakpoints);
  for (std::size_t i = 0; i < a.controls.size(); ++i) EXPECT_EQ(a.controls[i], b.controls[i]);
  EXPECT_NE(a.breakpoints, d.breakpoints);
}

TEST(SamplerTest, ControlsInsideCone) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ConeSpec c = x2_cone(F23, frac(1, 2));
    ControlCurve curve = sample_cone_curve(c, 3, seed);
    curve.validate();
    for (const AlgebraVector& h : curve.controls) {
      ASSERT_TRUE(in_euclidean_cone(h, c));
      ++checked;
    }
    ASSERT_LE(curve.max_speed_squared(), 2);
  }
  EXPECT_EQ(checked, 600u);
}

TEST(SamplerTest, NarrowConeCollapsesToAxis) {
  ConeSpec c(horizontal(F23, frac(3, 5), frac(4, 5)), frac(1, 1000));
  ControlCurve curve = sample_cone_curve(c, 50, 5);
  for (const AlgebraVector& h : curve.controls) {
    Scalar dot = h[0] * frac(3, 5) + h[1] * frac(4, 5);
    Scalar norm2 = h[0] * h[0] + h[1] * h[1];
    ASSERT_GT(dot, 0);
    // cos^2 > (1 - 10^-6)^2
    ASSERT_GT(dot * dot, pow(1 - frac(1, 1000000), 2) * norm2);
  }
}
