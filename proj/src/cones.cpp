#include "carnot/cones.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "carnot/parallel.hpp"

namespace carnot {

ConeSpec::ConeSpec(AlgebraVector axis, Scalar sigma) : axis_(std::move(axis)), sigma_(std::move(sigma)) {
  if (!is_horizontal(axis_)) throw Error(ErrorCode::domain, "cone axis must be horizontal");
  if (axis_[0] * axis_[0] + axis_[1] * axis_[1] != 1) throw Error(ErrorCode::domain, "cone axis must be a unit vector");
  if (sigma_ <= 0 || sigma_ >= 1) throw Error(ErrorCode::domain, "cone opening must lie in (0, 1)");
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::inside: return "inside";
    case Decision::outside: return "outside";
    case Decision::undecided: return "undecided";
  }
  return "?";
}

bool in_euclidean_cone(const AlgebraVector& v, const ConeSpec& c) {
  require_same_group(v.group(), c.group());
  if (!is_horizontal(v)) throw Error(ErrorCode::invalid_argument, "euclidean cone test needs a horizontal vector");
  const AlgebraVector& e = c.axis();
  Scalar dot = v[0] * e[0] + v[1] * e[1];
  if (dot <= 0) return false;
  Scalar k = 1 - c.sigma() * c.sigma();
  return dot * dot > k * k * (v[0] * v[0] + v[1] * v[1]);
}

Decision in_metric_cone(const GroupPoint& w, const ConeSpec& c, const MetricParams& p, double rel_tol) {
  require_same_group(w.group(), c.group());
  const SubgroupDistance d = dist_to_subgroup(w, c.axis(), p, rel_tol);
  const Scalar bound6 = pow(c.sigma(), 6) * box_norm(w, p).sixth_power();
  if (d.attained.sixth_power() <= bound6) return Decision::inside;
  if (d.exact || d.lower_twelfth > bound6 * bound6) return Decision::outside;
  return Decision::undecided;
}

std::vector<Scalar> semigroup_closure_terms(const GroupPoint& x) {
  if (x.group().kind() == GroupKind::f23) {
    const Scalar &x2 = x[1], &x3 = x[2], &x4 = x[3], &x5 = x[4];
    return {x2, x2 * x2 * x2 * x4 - 2 * x2 * x2 * x3 * x3 - 6 * x2 * x3 * x5 - 6 * x5 * x5};
  }
  const Scalar &x2 = x[1], &x3 = x[2], &x4 = x[3];
  return {x2, x4, 2 * x2 * x4 - x3 * x3};
}

bool in_semigroup_closure(const GroupPoint& x) {
  for (const Scalar& v : semigroup_closure_terms(x))
    if (v < 0) return false;
  return true;
}

bool in_translated_constraint(const GroupPoint& p, const GroupPoint& q) {
  require_same_group(p.group(), q.group());
  return in_semigroup_closure(inverse(p) * q);
}

LipschitzReport is_intrinsic_lipschitz(const std::vector<GraphSample>& points, const ConeSpec& c,
                                       const MetricParams& p, unsigned workers) {
  {
    std::set<Scalar> seen;
    for (const GraphSample& s : points) {
      require_same_group(s.x.group(), c.group());
      if (!seen.insert(s.t).second) throw Error(ErrorCode::invalid_argument, "duplicate parameter " + to_string(s.t));
    }
  }
  const std::size_t n = points.size();
  const Scalar sigma6 = pow(c.sigma(), 6);

  struct Partial {
    bool any = false;
    Scalar ratio;
    std::pair<std::size_t, std::size_t> worst{0, 0};
    bool exact = true;
    bool outside = false;
    std::size_t pairs = 0;
  };
  const std::size_t blocks = std::min<std::size_t>(n, 64);
  std::vector<Partial> partial(std::max<std::size_t>(blocks, 1));
  parallel_blocks(n, blocks, workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    Partial& out = partial[b];
    for (std::size_t j = lo; j < hi; ++j) {
      const GroupPoint xj_inv = inverse(points[j].x);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        ++out.pairs;
        GroupPoint w = xj_inv * points[i].x;
        NormValue norm = box_norm(w, p);
        if (norm.is_zero()) continue;
        SubgroupDistance d = dist_to_subgroup(w, c.axis(), p);
        out.exact = out.exact && d.exact;
        Scalar ratio = d.attained.sixth_power() / norm.sixth_power();
        if (!out.any || ratio > out.ratio) {
          out.any = true;
          out.ratio = ratio;
          out.worst = {i, j};
        }
        if (d.lower_twelfth > sigma6 * sigma6 * norm.sixth_power() * norm.sixth_power()) out.outside = true;
      }
    }
  });

  LipschitzReport r;
  r.sigma_sixth = 0;
  bool any = false, outside = false;
  for (const Partial& part : partial) {
    r.pairs += part.pairs;
    r.exact = r.exact && part.exact;
    outside = outside || part.outside;
    if (part.any && (!any || part.ratio > r.sigma_sixth)) {
      any = true;
      r.sigma_sixth = part.ratio;
      r.worst = part.worst;
    }
  }
  r.sigma = std::pow(to_double(r.sigma_sixth), 1.0 / 6.0);
  r.below_one = r.sigma_sixth < 1;
  if (r.sigma_sixth <= sigma6)
    r.verdict = Decision::inside;
  else if (outside || r.exact)
    r.verdict = Decision::outside;
  else
    r.verdict = Decision::undecided;
  return r;
}

Opening graph_cone_opening(const Scalar& sigma) {
  if (sigma < 0 || sigma > 1) throw Error(ErrorCode::domain, "opening must lie in [0, 1]");
  Opening o;
  if (auto inner = exact_sqrt(1 - sigma * sigma)) o.exact = exact_sqrt(1 - *inner);
  if (o.exact) {
    o.approx = to_double(*o.exact);
  } else {
    // 1 - sqrt(1 - s^2) = s^2 / (1 + sqrt(1 - s^2)) avoids cancellation for small s
    double s = to_double(sigma);
    o.approx = std::sqrt(s * s / (1 + std::sqrt(1 - s * s)));
  }
  return o;
}

}  // namespace carnot
