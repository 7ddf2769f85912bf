#include "carnot/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "carnot/parallel.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

void MetricParams::validate() const {
  if (eps1 <= 0 || eps2 <= 0 || eps3 <= 0) throw Error(ErrorCode::domain, "metric weights must be positive");
}

NormValue::NormValue(std::array<Scalar, 3> term_sixth_powers) : terms_(std::move(term_sixth_powers)) {
  argmax_ = horizontal;
  if (terms_[1] > terms_[argmax_]) argmax_ = second_layer;
  if (terms_[2] > terms_[argmax_]) argmax_ = third_layer;
}

NormValue NormValue::of(const Scalar& r) {
  if (r < 0) throw Error(ErrorCode::domain, "norm value must be nonnegative");
  return NormValue({pow(r, 6), Scalar(0), Scalar(0)});
}

std::optional<Scalar> NormValue::exact_value() const {
  const Scalar& s = sixth_power();
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), s.get_num_mpz_t(), 6) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), s.get_den_mpz_t(), 6) == 0) return std::nullopt;
  Scalar r(num, den);
  r.canonicalize();
  return r;
}

double NormValue::approx() const {
  if (auto v = exact_value()) return to_double(*v);
  return std::pow(to_double(sixth_power()), 1.0 / 6.0);
}

int NormValue::compare(const Scalar& r) const {
  if (r < 0) return 1;
  return cmp(sixth_power(), pow(r, 6));
}

NormValue NormValue::scaled(const Scalar& s) const {
  if (s < 0) throw Error(ErrorCode::domain, "norm scale must be nonnegative");
  Scalar s6 = pow(s, 6);
  return NormValue({terms_[0] * s6, terms_[1] * s6, terms_[2] * s6});
}

namespace {

// Sixth powers of the three homogeneous terms, given exponential coordinates.
template <class T>
std::array<T, 3> term_sixth_powers(const GroupDescriptor& g, const std::vector<T>& coords, const MetricParams& p) {
  T h(Scalar(0)), mid(Scalar(0)), top(Scalar(0));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    switch (g.weight(i)) {
      case 1: h += coords[i] * coords[i]; break;
      case 2: mid = coords[i]; break;  // one-dimensional in both groups
      case 3: top += coords[i] * coords[i]; break;
    }
  }
  return {T(pow(p.eps1, 6)) * h * h * h, mid, T(pow(p.eps3, 6)) * top};
}

}  // namespace

NormValue box_norm(const GroupPoint& x, const MetricParams& p) {
  const GroupDescriptor& g = x.group();
  std::vector<Scalar> log = log_second_kind(g, x.coords());
  auto t = term_sixth_powers(g, log, p);
  // |g2|^3 for the scalar second layer
  Scalar mid = abs(t[1]);
  t[1] = pow(p.eps2, 6) * mid * mid * mid;
  return NormValue(std::move(t));
}

NormValue distance(const GroupPoint& x, const GroupPoint& y, const MetricParams& p) {
  require_same_group(x.group(), y.group());
  return box_norm(inverse(x) * y, p);
}

// ---------------------------------------------------------------------------
// dist_to_subgroup

namespace {

struct Univariate {
  std::vector<Scalar> c;  // c[k] * lambda^k

  Scalar operator()(const Scalar& x) const {
    Scalar r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
  }

  // Lower bound on [m - r, m + r] from the Taylor expansion at m.
  Scalar lower_bound(const Scalar& m, const Scalar& r) const {
    std::vector<Scalar> d = c;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t k = n - 1; k > i; --k) d[k - 1] += m * d[k];
    Scalar tail = 0, rk = 1;
    for (std::size_t k = 1; k < n; ++k) {
      rk *= r;
      tail += abs(d[k]) * rk;
    }
    return d[0] - tail;
  }
};

struct Box {
  Scalar lo, hi, bound;
  bool operator>(const Box& o) const { return bound > o.bound; }
};

// Twelfth powers of the three terms of ||w^-1 exp(lambda e)|| as polynomials in lambda.
std::array<Univariate, 3> twelfth_power_polynomials(const GroupPoint& w, const AlgebraVector& e,
                                                   const MetricParams& p) {
  const GroupDescriptor& g = w.group();
  const Polynomial lambda = Polynomial::variable(0);
  std::vector<Polynomial> winv, step(g.dimension(), Polynomial(Scalar(0)));
  const GroupPoint w_inv = inverse(w);
  for (const Scalar& c : w_inv.coords()) winv.emplace_back(c);
  step[0] = Polynomial(e[0]) * lambda;
  step[1] = Polynomial(e[1]) * lambda;
  std::vector<Polynomial> moved = product_formula(g, winv, exp_second_kind(g, step));
  auto t = term_sixth_powers(g, log_second_kind(g, moved), p);
  Polynomial mid2 = t[1] * t[1];
  std::array<Polynomial, 3> twelfth{t[0] * t[0], Polynomial(pow(p.eps2, 12)) * mid2 * mid2 * t[1] * t[1],
                                    t[2] * t[2]};
  std::array<Univariate, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].c = twelfth[i].univariate_coefficients();
    if (out[i].c.empty()) out[i].c.push_back(0);
  }
  return out;
}

// Smallest power of two >= x > 0.
Scalar dyadic_ceiling(const Scalar& x) {
  Scalar r = 1;
  while (r < x) r *= 2;
  while (r / 2 >= x) r /= 2;
  return r;
}

}  // namespace

SubgroupDistance dist_to_subgroup(const GroupPoint& w, const AlgebraVector& e, const MetricParams& p,
                                  double rel_tol) {
  require_same_group(w.group(), e.group());
  if (!is_horizontal(e)) throw Error(ErrorCode::invalid_argument, "subgroup direction must be horizontal");
  if (e[0] == 0 && e[1] == 0) throw Error(ErrorCode::invalid_argument, "subgroup direction must be nonzero");
  if (!(rel_tol > 0)) throw Error(ErrorCode::domain, "tolerance must be positive");
  p.validate();
  const GroupDescriptor& g = w.group();

  auto at = [&](const Scalar& lambda) {
    return box_norm(inverse(w) * exp_c2(lambda * e), p);
  };
  auto exact_result = [&](const Scalar& lambda) {
    SubgroupDistance d;
    d.exact = true;
    d.argmin = lambda;
    d.value = d.attained = at(lambda);
    d.lower = d.upper = d.value.approx();
    d.lower_twelfth = d.value.sixth_power() * d.value.sixth_power();
    return d;
  };

  // On the subgroup: log w is a multiple of e.
  AlgebraVector lw = log_c2(w);
  {
    const Scalar& ref = e[0] != 0 ? e[0] : e[1];
    const Scalar lambda = (e[0] != 0 ? lw[0] : lw[1]) / ref;
    if (lambda * e == lw) return exact_result(lambda);
  }

  // Axis X2 with w = exp(a X2) exp(b X4-type top coordinates) in the centralizer of X2:
  // the horizontal term vanishes at lambda = a and the other terms are constant.
  if (e[0] == 0) {
    bool axis_shape = w[0] == 0 && w[2] == 0;
    if (g.kind() == GroupKind::f23) axis_shape = axis_shape && w[4] == 0;
    if (axis_shape) return exact_result(w[1] / e[1]);
  }

  // General case: exact branch and bound on the 12th power over dyadic boxes.
  const auto polys = twelfth_power_polynomials(w, e, p);
  auto objective = [&](const Scalar& x) {
    return std::max({polys[0](x), polys[1](x), polys[2](x)});
  };
  auto box_bound = [&](const Scalar& lo, const Scalar& hi) {
    Scalar m = (lo + hi) / 2, r = (hi - lo) / 2;
    return std::max({polys[0].lower_bound(m, r), polys[1].lower_bound(m, r), polys[2].lower_bound(m, r)});
  };

  // Beyond |lambda| > R the horizontal term alone exceeds ||w|| (s^(1/6) <= max(1, s)).
  const NormValue at_zero = at(0);
  const Scalar norm_bound = std::max<Scalar>(1, at_zero.sixth_power());
  const Scalar R = dyadic_ceiling((abs(lw[0]) + abs(lw[1]) + norm_bound / p.eps1) /
                                  std::max<Scalar>(abs(e[0]), abs(e[1])));

  Scalar best_value = objective(0);
  Scalar best_lambda = 0;
  std::priority_queue<Box, std::vector<Box>, std::greater<>> heap;
  heap.push({-R, R, box_bound(-R, R)});
  const Scalar tol12 = Scalar(12 * rel_tol);
  for (int iter = 0; iter < 20000 && !heap.empty(); ++iter) {
    const Box& top = heap.top();
    if (best_value - top.bound <= tol12 * best_value) break;
    Box b = top;
    heap.pop();
    Scalar mid = (b.lo + b.hi) / 2;
    Scalar v = objective(mid);
    if (v < best_value) {
      best_value = v;
      best_lambda = mid;
    }
    for (auto& [lo, hi] : {std::pair{b.lo, mid}, std::pair{mid, b.hi}}) {
      Scalar bound = box_bound(lo, hi);
      if (bound < best_value) heap.push({lo, hi, bound});
    }
  }
  // Pruned boxes had bounds above an incumbent, so the heap minimum is a global lower bound.
  Scalar lower12 = heap.empty() ? best_value : std::min(best_value, heap.top().bound);
  if (lower12 < 0) lower12 = 0;

  SubgroupDistance d;
  d.exact = false;
  d.argmin = best_lambda;
  d.attained = at(best_lambda);
  d.value = d.attained;
  d.lower_twelfth = lower12;
  d.upper = d.attained.approx();
  d.lower = std::min(d.upper, std::pow(to_double(lower12), 1.0 / 12.0) * (1 - 0x1p-50));
  return d;
}

// ---------------------------------------------------------------------------
// calibrate

double triangle_quotient(const GroupPoint& x, const GroupPoint& y, const GroupPoint& z, const MetricParams& p) {
  double xz = distance(x, z, p).approx();
  double denom = distance(x, y, p).approx() + distance(y, z, p).approx();
  if (denom == 0) return xz == 0 ? 1.0 : INFINITY;
  return xz / denom;
}

CalibrationReport calibrate(const GroupDescriptor& g, const MetricParams& p, std::size_t trials, std::uint64_t seed,
                            unsigned workers, std::size_t keep_worst) {
  p.validate();
  constexpr std::size_t kBlocks = 64;
  struct Partial {
    std::vector<CalibrationWitness> worst;
    std::size_t violations = 0;
  };
  std::vector<Partial> partial(kBlocks);
  auto by_quotient = [](const CalibrationWitness& a, const CalibrationWitness& b) { return a.quotient > b.quotient; };

  parallel_blocks(trials, kBlocks, workers, [&](std::size_t block, std::size_t lo, std::size_t hi) {
    Partial& out = partial[block];
    for (std::size_t trial = lo; trial < hi; ++trial) {
      std::mt19937_64 rng(derive_seed(seed, trial));
      auto draw = [&] {
        std::vector<Scalar> c(g.dimension());
        for (Scalar& v : c) v = random_grid(rng, -1, 1, 1u << 16);
        return GroupPoint(g, std::move(c));
      };
      auto scale = [&] { return ipow(Scalar(2), -static_cast<int>(rng() % 9)); };
      GroupPoint x = draw();
      // half of the increments are horizontal
      auto increment = [&] {
        GroupPoint u = draw();
        if (rng() & 1) u = GroupPoint::basis(g, 0, u[0]) * GroupPoint::basis(g, 1, u[1]);
        return dilate(scale(), u);
      };
      GroupPoint y = x * increment();
      GroupPoint z = y * increment();
      CalibrationWitness w{x.coords(), y.coords(), z.coords(), triangle_quotient(x, y, z, p)};
      if (w.quotient > 1) ++out.violations;
      out.worst.push_back(std::move(w));
      std::stable_sort(out.worst.begin(), out.worst.end(), by_quotient);
      if (out.worst.size() > keep_worst) out.worst.resize(keep_worst);
    }
  });

  CalibrationReport report;
  report.params = p;
  report.group = std::string(g.name());
  report.trials = trials;
  report.seed = seed;
  for (Partial& part : partial) {
    report.violations += part.violations;
    for (auto& w : part.worst) report.worst.push_back(std::move(w));
  }
  std::stable_sort(report.worst.begin(), report.worst.end(), by_quotient);
  if (report.worst.size() > keep_worst) report.worst.resize(keep_worst);
  report.max_quotient = report.worst.empty() ? 0 : report.worst.front().quotient;
  return report;
}

}  // namespace carnot
