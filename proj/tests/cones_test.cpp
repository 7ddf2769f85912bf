#include <gtest/gtest.h>

#include <random>

#include "carnot/cones.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::pt;
using carnot::testing::random_point;
using carnot::testing::random_positive;
using carnot::testing::random_rational;

namespace {

const GroupDescriptor& F23 = GroupDescriptor::f23();
const GroupDescriptor& ENGEL = GroupDescriptor::engel();

ConeSpec x2_cone(const GroupDescriptor& g, Scalar sigma) { return ConeSpec(AlgebraVector::basis(g, 1), sigma); }

}  // namespace

TEST(ConeSpecTest, Validation) {
  EXPECT_NO_THROW(ConeSpec(horizontal(F23, frac(3, 5), frac(4, 5)), frac(1, 2)));
  EXPECT_THROW(ConeSpec(horizontal(F23, 1, 1), frac(1, 2)), Error);
  EXPECT_THROW(ConeSpec(AlgebraVector::basis(F23, 2), frac(1, 2)), Error);
  EXPECT_THROW(x2_cone(F23, 0), Error);
  EXPECT_THROW(x2_cone(F23, 1), Error);
}

TEST(EuclideanConeTest, Examples) {
  ConeSpec c = x2_cone(F23, frac(1, 2));
  EXPECT_TRUE(in_euclidean_cone(AlgebraVector::basis(F23, 1), c));
  EXPECT_FALSE(in_euclidean_cone(horizontal(F23, 1, 1), c));  // 1 < (3/4)^2 * 2
  EXPECT_FALSE(in_euclidean_cone(horizontal(F23, 0, -1), c));
  EXPECT_FALSE(in_euclidean_cone(AlgebraVector::zero(F23), c));
  EXPECT_THROW(in_euclidean_cone(AlgebraVector::basis(F23, 2), c), Error);
}

TEST(EuclideanConeTest, TiltedAxis) {
  ConeSpec c(horizontal(F23, frac(3, 5), frac(4, 5)), frac(4, 5));
  // 1 - sigma^2 = 9/25
  EXPECT_TRUE(in_euclidean_cone(horizontal(F23, 0, 1), c));   // 4/5
  EXPECT_TRUE(in_euclidean_cone(horizontal(F23, 1, 0), c));   // 3/5
  EXPECT_FALSE(in_euclidean_cone(horizontal(F23, -1, 0), c));
  EXPECT_FALSE(in_euclidean_cone(horizontal(F23, 4, -3), c));  // orthogonal
  // cos 7/25 < 9/25
  EXPECT_FALSE(in_euclidean_cone(horizontal(F23, -3, 4), c));
  EXPECT_TRUE(in_euclidean_cone(horizontal(F23, 4, 3), c));  // 24/25
}

TEST(MetricConeTest, Examples) {
  MetricParams p;
  ConeSpec c = x2_cone(F23, frac(1, 2));
  EXPECT_EQ(in_metric_cone(pt(F23, {"0", "-3", "0", "0", "0"}), c, p), Decision::inside);
  EXPECT_EQ(in_metric_cone(identity(F23), c, p), Decision::inside);
  // (0, a, 0, b, 0): eps3 |b|^(1/3) <= sigma max(|a|, eps3 |b|^(1/3))
  EXPECT_EQ(in_metric_cone(pt(F23, {"0", "1", "0", "8", "0"}), c, p), Decision::inside);     // 1/2 <= 1/2
  EXPECT_EQ(in_metric_cone(pt(F23, {"0", "1", "0", "27", "0"}), c, p), Decision::outside);   // 3/4 > 3/8
  EXPECT_EQ(in_metric_cone(pt(F23, {"0", "1", "0", "-8", "0"}), c, p), Decision::inside);
  EXPECT_EQ(in_metric_cone(pt(F23, {"1", "0", "0", "0", "0"}), c, p), Decision::outside);   // 1 vs 1/2
}

TEST(MetricConeTest, AxisClosedFormAgrees) {
  MetricParams p;
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    Scalar a = random_rational(rng), b = random_rational(rng), sigma = frac(1 + (i % 9), 10);
    ConeSpec c = x2_cone(F23, sigma);
    Scalar dist6 = pow(p.eps3, 6) * b * b;
    Scalar norm6 = std::max<Scalar>(pow(a, 6), dist6);
    bool expected = dist6 <= pow(sigma, 6) * norm6;
    Decision d = in_metric_cone(GroupPoint(F23, {0, a, 0, b, 0}), c, p);
    ASSERT_EQ(d, expected ? Decision::inside : Decision::outside);
  }
}

TEST(MetricConeTest, DilationInvariantAndMonotone) {
  MetricParams p;
  std::mt19937_64 rng(32);
  AlgebraVector e = horizontal(F23, frac(3, 5), frac(4, 5));
  for (int i = 0; i < 12; ++i) {
    GroupPoint w = random_point(F23, rng);
    // bias toward the axis so both outcomes occur
    w = exp_c2(frac(5 + i, 2) * e) * dilate(frac(1, 4), w);
    Scalar l = random_positive(rng);
    ConeSpec small(e, frac(1, 4)), large(e, frac(3, 4));
    Decision ds = in_metric_cone(w, small, p), dl = in_metric_cone(w, large, p);
    ASSERT_NE(ds, Decision::undecided);
    ASSERT_NE(dl, Decision::undecided);
    if (ds == Decision::inside) ASSERT_EQ(dl, Decision::inside);
    ASSERT_EQ(in_metric_cone(dilate(l, w), small, p), ds);
  }
}

TEST(EuclideanConeTest, DilationAndMonotonicity) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 500; ++i) {
    AlgebraVector v = horizontal(F23, random_rational(rng), random_rational(rng));
    Scalar l = random_positive(rng);
    ConeSpec small(horizontal(F23, frac(5, 13), frac(12, 13)), frac(1, 3));
    ConeSpec large(horizontal(F23, frac(5, 13), frac(12, 13)), frac(2, 3));
    bool s = in_euclidean_cone(v, small);
    ASSERT_EQ(in_euclidean_cone(dilate(l, v), small), s);
    if (s) ASSERT_TRUE(in_euclidean_cone(v, large));
  }
}

TEST(SemigroupClosureTest, Examples) {
  EXPECT_TRUE(in_semigroup_closure(identity(F23)));
  EXPECT_TRUE(in_semigroup_closure(identity(ENGEL)));
  EXPECT_TRUE(in_semigroup_closure(pt(F23, {"0", "1", "0", "1", "0"})));
  EXPECT_FALSE(in_semigroup_closure(pt(F23, {"0", "1", "0", "-1", "0"})));
  EXPECT_FALSE(in_semigroup_closure(pt(F23, {"0", "-1", "0", "1", "0"})));
  EXPECT_FALSE(in_semigroup_closure(pt(F23, {"0", "0", "0", "0", "1"})));  // -6 x5^2
  EXPECT_TRUE(in_semigroup_closure(pt(F23, {"7", "0", "0", "0", "0"})));   // x1 is free
  EXPECT_TRUE(in_semigroup_closure(pt(ENGEL, {"0", "1", "1", "1"})));     // 2 - 1
  EXPECT_FALSE(in_semigroup_closure(pt(ENGEL, {"0", "1", "2", "1"})));    // 2 - 4
  EXPECT_FALSE(in_semigroup_closure(pt(ENGEL, {"0", "1", "0", "-1"})));
  std::vector<Scalar> terms = semigroup_closure_terms(pt(F23, {"0", "2", "1", "3", "1"}));
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[1], Scalar(8 * 3 - 2 * 4 - 6 * 2 - 6));
}

TEST(SemigroupClosureTest, DilationInvariant) {
  std::mt19937_64 rng(34);
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    for (int i = 0; i < 500; ++i) {
      GroupPoint x = random_point(*g, rng);
      ASSERT_EQ(in_semigroup_closure(dilate(random_positive(rng), x)), in_semigroup_closure(x));
    }
  }
}

TEST(TranslatedConstraintTest, AxisReduction) {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 300; ++i) {
    Scalar t0 = random_rational(rng), t = random_rational(rng), a = random_rational(rng), b = random_rational(rng);
    if (t <= t0) std::swap(t, t0);
    GroupPoint p(F23, {0, t0, 0, a, 0}), q(F23, {0, t, 0, b, 0});
    bool expected = pow(t - t0, 3) * (b - a) >= 0;
    ASSERT_EQ(in_translated_constraint(p, q), expected);
  }
  GroupPoint p = random_point(F23, rng);
  EXPECT_TRUE(in_translated_constraint(p, p));
}

TEST(TranslatedConstraintTest, OneSided) {
  std::mt19937_64 rng(36);
  int both = 0;
  for (const GroupDescriptor* g : {&F23, &ENGEL}) {
    for (int i = 0; i < 2000; ++i) {
      GroupPoint p = random_point(*g, rng);
      // small perturbations hit both directions more often
      GroupPoint q = p * dilate(frac(1, 8), random_point(*g, rng));
      if (i % 4 == 0) q = p * GroupPoint::basis(*g, 0, random_rational(rng));
      if (in_translated_constraint(p, q) && in_translated_constraint(q, p)) {
        ++both;
        ASSERT_EQ(q[1], p[1]);
      }
    }
  }
  EXPECT_GT(both, 0);
}

TEST(IntrinsicLipschitzTest, PointsOnTheAxis) {
  MetricParams p;
  ConeSpec c = x2_cone(F23, frac(1, 100));
  std::vector<GraphSample> pts{{0, identity(F23)}, {1, GroupPoint::basis(F23, 1, 1)}, {frac(5, 2), GroupPoint::basis(F23, 1, frac(5, 2))}};
  LipschitzReport r = is_intrinsic_lipschitz(pts, c, p);
  EXPECT_EQ(r.verdict, Decision::inside);
  EXPECT_EQ(r.sigma_sixth, 0);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.pairs, 6u);
}

TEST(IntrinsicLipschitzTest, HorizontalJumpViolates) {
  MetricParams p;
  std::mt19937_64 rng(37);
  for (int i = 0; i < 5; ++i) {
    GroupPoint base = GroupPoint::basis(F23, 1, random_rational(rng));
    std::vector<GraphSample> pts{{0, base}, {frac(1, 1000), base * pt(F23, {"1", "0", "0", "0", "0"})}};
    LipschitzReport r = is_intrinsic_lipschitz(pts, x2_cone(F23, frac(99, 100)), p);
    EXPECT_EQ(r.verdict, Decision::outside);
    EXPECT_EQ(r.sigma_sixth, 1);
    EXPECT_FALSE(r.below_one);
  }
}

TEST(IntrinsicLipschitzTest, ThirdLayerGraph) {
  // Phi(i) = (0, i, 0, -i / (343 eps3^3), 0): |f(s) - f(t)| <= (|s - t| / 7)^3 / eps3^3 on integers
  MetricParams p;
  std::vector<GraphSample> pts;
  for (int i = 0; i <= 6; ++i) pts.push_back({i, GroupPoint(F23, {0, i, 0, Scalar(-i) / 343 * ipow(p.eps3, -3), 0})});
  LipschitzReport r = is_intrinsic_lipschitz(pts, x2_cone(F23, frac(1, 7)), p);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.verdict, Decision::inside);
  EXPECT_EQ(r.sigma_sixth, pow(frac(1, 7), 6));  // attained by neighbours
  EXPECT_TRUE(r.below_one);
  LipschitzReport tight = is_intrinsic_lipschitz(pts, x2_cone(F23, frac(1, 100)), p);
  EXPECT_EQ(tight.verdict, Decision::outside);
}

TEST(IntrinsicLipschitzTest, DuplicateParameterRejected) {
  MetricParams p;
  std::vector<GraphSample> pts{{1, identity(F23)}, {1, GroupPoint::basis(F23, 1, 1)}};
  try {
    is_intrinsic_lipschitz(pts, x2_cone(F23, frac(1, 2)), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(IntrinsicLipschitzTest, WorkerCountDoesNotMatter) {
  MetricParams p;
  std::mt19937_64 rng(38);
  std::vector<GraphSample> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({i, GroupPoint(F23, {0, i, 0, random_rational(rng), 0})});
  ConeSpec c = x2_cone(F23, frac(1, 2));
  LipschitzReport a = is_intrinsic_lipschitz(pts, c, p, 1), b = is_intrinsic_lipschitz(pts, c, p, 3);
  EXPECT_EQ(a.sigma_sixth, b.sigma_sixth);
  EXPECT_EQ(a.worst, b.worst);
}

TEST(GraphConeOpeningTest, Examples) {
  Opening zero = graph_cone_opening(0);
  EXPECT_EQ(*zero.exact, 0);
  Opening one = graph_cone_opening(1);
  EXPECT_EQ(*one.exact, 1);
  Opening three_fifths = graph_cone_opening(frac(3, 5));
  EXPECT_FALSE(three_fifths.exact.has_value());  // sqrt(1/5)
  EXPECT_NEAR(three_fifths.approx, std::sqrt(0.2), 1e-15);
  // inner sqrt(576/625), outer sqrt(1/25)
  Opening rational = graph_cone_opening(frac(7, 25));
  ASSERT_TRUE(rational.exact.has_value());
  EXPECT_EQ(*rational.exact, frac(1, 5));
  EXPECT_FALSE(graph_cone_opening(frac(4, 5)).exact.has_value());  // sqrt(2/5)
  EXPECT_THROW(graph_cone_opening(frac(-1, 2)), Error);
  EXPECT_THROW(graph_cone_opening(frac(3, 2)), Error);
  // s / sqrt(2) (1 + s^2 / 8 + ...)
  EXPECT_NEAR(graph_cone_opening(frac(1, 1000000)).approx, 1e-6 / std::sqrt(2.0) * (1 + 1e-12 / 8), 1e-21);
}
