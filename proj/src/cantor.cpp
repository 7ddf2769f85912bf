#include "carnot/cantor.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/parallel.hpp"

namespace carnot {

namespace {

const Scalar& eight_inv6() {
  static const Scalar v = ipow(Scalar(8), -6);
  return v;
}

// sum_{l >= m} 8^(-6l)
Scalar tail_sum(unsigned m) { return ipow(Scalar(8), -6 * static_cast<int>(m)) / (1 - eight_inv6()); }

GroupPoint plateau_point(const GroupDescriptor& g, const Scalar& t, const Scalar& w) {
  std::vector<Scalar> c(g.dimension());
  c[1] = t;
  c[3] = w;
  return GroupPoint(g, std::move(c));
}

void require_eps3(const Scalar& eps3) {
  if (eps3 <= 0) throw Error(ErrorCode::domain, "eps3 must be positive");
}

}  // namespace

Scalar CantorLevel::length() const {
  Scalar total = 0;
  for (const Interval& i : intervals) total += i.length();
  return total;
}

std::optional<std::size_t> CantorLevel::locate(const Scalar& t) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](const Scalar& v, const Interval& i) { return v < i.a; });
  if (it == intervals.begin()) return std::nullopt;
  --it;
  if (!it->contains(t)) return std::nullopt;
  return static_cast<std::size_t>(it - intervals.begin());
}

Scalar gap_radius(unsigned k) { return ipow(Scalar(8), -static_cast<int>(k)); }

std::vector<CantorLevel> build_levels(unsigned k_max) {
  if (k_max == 0) throw Error(ErrorCode::domain, "depth must be at least 1");
  if (k_max > 40) throw Error(ErrorCode::domain, "depth above 40 is not supported");
  std::vector<CantorLevel> levels;
  levels.push_back({1, {{Scalar(0), Scalar(1)}}});
  for (unsigned k = 2; k <= k_max; ++k) {
    const CantorLevel& prev = levels.back();
    const Scalar r = gap_radius(k - 1);
    CantorLevel next{k, {}};
    next.intervals.reserve(2 * prev.intervals.size());
    for (const Interval& i : prev.intervals) {
      const Scalar c = i.center();
      if (c - r <= i.a) throw Error(ErrorCode::internal, "gap does not fit");
      next.intervals.push_back({i.a, c - r});
      next.intervals.push_back({c + r, i.b});
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

Scalar measure(unsigned k) { return build_levels(k).back().length(); }

Scalar measure_closed_form(unsigned k) {
  if (k == 0) throw Error(ErrorCode::domain, "depth must be at least 1");
  return frac(2, 3) + ipow(Scalar(4), -static_cast<int>(k - 1)) / 3;
}

Scalar measure_limit() { return frac(2, 3); }

Scalar omega_hat(unsigned k, std::uint64_t j) {
  if (k == 0 || k > 64) throw Error(ErrorCode::invalid_argument, "level out of range");
  if (j < 1 || (k < 64 && j > (std::uint64_t{1} << (k - 1))))
    throw Error(ErrorCode::invalid_argument, "interval index out of range");
  if (k == 1) return 0;
  // ω(k, j) = ω(k-1, ceil(j/2)) - [j even] 8^(-6(k-1))
  Scalar parent = omega_hat(k - 1, (j + 1) / 2);
  if (j % 2 == 0) parent -= ipow(Scalar(8), -6 * static_cast<int>(k - 1));
  return parent;
}

Scalar omega(unsigned k, std::uint64_t j, const Scalar& eps3) {
  require_eps3(eps3);
  return omega_hat(k, j) / pow(eps3, 3);
}

bool in_omega_set(unsigned k, const Scalar& x) {
  if (k == 0) return false;
  Scalar rest = -x;
  for (unsigned l = 1; l < k; ++l) {
    Scalar term = ipow(Scalar(8), -6 * static_cast<int>(l));
    // each term exceeds the sum of all later ones, so greedy decoding is exact
    if (rest >= term) rest -= term;
  }
  return rest == 0;
}

Scalar holder_constant(unsigned k) {
  if (k == 0) throw Error(ErrorCode::domain, "depth must be at least 1");
  return (frac(1, 8) - ipow(Scalar(8), -static_cast<int>(k))) / (1 - frac(1, 8));
}

Scalar holder_constant_limit() { return frac(1, 7); }

CurveIterate::CurveIterate(unsigned k, Scalar eps3, const GroupDescriptor& g)
    : group_(&g), level_(build_levels(k).back()), eps3_(std::move(eps3)) {
  require_eps3(eps3_);
  if (g.dimension() < 4) throw Error(ErrorCode::unsupported, "group too small for the curve");
  omega_hat_.reserve(level_.intervals.size());
  omega_hat_.push_back(0);
  for (unsigned m = 2; m <= k; ++m) {
    const Scalar step = ipow(Scalar(8), -6 * static_cast<int>(m - 1));
    std::vector<Scalar> next;
    next.reserve(2 * omega_hat_.size());
    for (const Scalar& w : omega_hat_) {
      next.push_back(w);
      next.push_back(w - step);
    }
    omega_hat_ = std::move(next);
  }
}

Scalar CurveIterate::omega(std::size_t index) const { return omega_hat_.at(index) / pow(eps3_, 3); }

GroupPoint CurveIterate::operator()(const Scalar& t) const {
  if (auto j = level_.locate(t)) return plateau_point(*group_, t, omega(*j));
  if (t < 0 || t > 1) throw Error(ErrorCode::domain, "t = " + to_string(t) + " is outside [0, 1]");
  auto it = std::upper_bound(level_.intervals.begin(), level_.intervals.end(), t,
                             [](const Scalar& v, const Interval& i) { return v < i.a; });
  const Interval& right = *it;
  const Interval& left = *(it - 1);
  throw Error(ErrorCode::domain, "t = " + to_string(t) + " lies in the removed gap (" + to_string(left.b) + ", " +
                                     to_string(right.a) + ") at level " + std::to_string(level_.k));
}

GroupPoint gamma_k(const Scalar& t, unsigned k, const Scalar& eps3, const GroupDescriptor& g) {
  return CurveIterate(k, eps3, g)(t);
}

std::uint64_t CantorPoint::index(unsigned k) const {
  if (k == 0 || k > 64) throw Error(ErrorCode::invalid_argument, "level out of range");
  std::uint64_t j = 0;
  for (unsigned i = 0; i + 1 < k; ++i) j = (j << 1) | digit(i);
  return j;
}

Scalar CantorPoint::value() const {
  Interval cur{0, 1};
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const Scalar c = cur.center(), r = gap_radius(static_cast<unsigned>(i + 1));
    cur = digits[i] ? Interval{c + r, cur.b} : Interval{cur.a, c - r};
  }
  // left children keep the left endpoint, right children the right one
  return tail ? cur.b : cur.a;
}

LimitValue gamma_limit(const CantorPoint& t, unsigned k_trunc, const Scalar& eps3, const GroupDescriptor& g) {
  require_eps3(eps3);
  if (k_trunc == 0) throw Error(ErrorCode::domain, "truncation level must be at least 1");
  const Scalar scale = 1 / pow(eps3, 3);
  Scalar partial = 0;
  for (unsigned l = 1; l < k_trunc; ++l)
    if (t.digit(l - 1)) partial -= ipow(Scalar(8), -6 * static_cast<int>(l));
  Scalar exact = 0;
  const unsigned n = static_cast<unsigned>(t.digits.size());
  for (unsigned l = 1; l <= n; ++l)
    if (t.digits[l - 1]) exact -= ipow(Scalar(8), -6 * static_cast<int>(l));
  if (t.tail) exact -= tail_sum(n + 1);
  const Scalar value = t.value();
  return {plateau_point(g, value, partial * scale), tail_sum(k_trunc) * scale, exact * scale};
}

bool CurveReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CurveCheck& c) { return c.pass; });
}

CurveReport verify_iterate(unsigned k, const MetricParams& p, unsigned workers, const GroupDescriptor& g) {
  if (k < 2) throw Error(ErrorCode::domain, "verification needs depth at least 2");
  p.validate();
  const CurveIterate cur(k, p.eps3, g), prev(k - 1, p.eps3, g);
  const Scalar scale = 1 / pow(p.eps3, 3);
  const Scalar eps3_cubed = pow(p.eps3, 3);
  const std::vector<Interval>& iv = cur.level().intervals;
  const std::size_t n = iv.size();
  constexpr std::size_t kMaxViolations = 20;

  CurveReport report;
  report.depth = k;
  report.eps3 = p.eps3;
  report.params = p;
  auto record = [&](std::vector<CurveViolation>& sink, CurveCheck& c, std::string detail) {
    c.pass = false;
    if (sink.size() < kMaxViolations) sink.push_back({c.name, std::move(detail)});
  };
  std::vector<CurveViolation> seq;
  auto violate = [&](CurveCheck& c, std::string detail) { record(seq, c, std::move(detail)); };
  auto ratio = [](const Scalar& lhs, const Scalar& rhs) {
    if (rhs == 0) return lhs == 0 ? 0.0 : INFINITY;
    return to_double(lhs / rhs);
  };

  CurveCheck a{"a"}, b{"b"}, c{"c"}, d{"d"}, e{"e"}, gap{"gap"};

  // (a) one step of the recurrence, per interval
  const Scalar step_bound = ipow(Scalar(8), -6 * static_cast<int>(k - 1)) * scale;
  for (std::size_t j = 0; j < n; ++j) {
    Scalar diff = prev.omega(j / 2) - cur.omega(j);
    ++a.checked;
    a.worst_ratio = std::max(a.worst_ratio, ratio(diff, step_bound));
    if (diff < 0 || diff > step_bound)
      violate(a, "interval " + std::to_string(j + 1) + ": drop " + to_string(diff));
  }

  // (c) plateau values in the omega set
  for (std::size_t j = 0; j < n; ++j) {
    ++c.checked;
    if (!in_omega_set(k, cur.omega(j) * eps3_cubed))
      violate(c, "interval " + std::to_string(j + 1) + ": " + to_string(cur.omega(j)));
  }

  // (d) strict decrease with gaps, and the limit-curve gap
  const Scalar limit_slack = 2 * tail_sum(k) * scale;
  const Scalar gap_bound = 5 * ipow(Scalar(8), -6 * static_cast<int>(k)) * scale;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Scalar drop = cur.omega(i) - cur.omega(j);
      ++d.checked;
      d.worst_ratio = std::max(d.worst_ratio, ratio(step_bound, drop));
      if (drop < step_bound)
        violate(d, "intervals " + std::to_string(i + 1) + " < " + std::to_string(j + 1) + ": drop " + to_string(drop));
      Scalar limit_drop = drop - limit_slack;
      ++gap.checked;
      gap.worst_ratio = std::max(gap.worst_ratio, ratio(gap_bound, limit_drop));
      if (limit_drop < gap_bound)
        violate(gap, "intervals " + std::to_string(i + 1) + " < " + std::to_string(j + 1));
    }
  }

  // (b), (e) over endpoint pairs
  struct Endpoint {
    Scalar t;
    std::size_t interval;
  };
  std::vector<Endpoint> ends;
  for (std::size_t j = 0; j < n; ++j) {
    ends.push_back({iv[j].a, j});
    ends.push_back({iv[j].b, j});
  }
  std::vector<GroupPoint> pts, pts_inv;
  for (const Endpoint& x : ends) {
    pts.push_back(cur(x.t));
    pts_inv.push_back(inverse(pts.back()));
  }
  const Scalar c3 = pow(holder_constant(k), 3);
  struct Partial {
    std::size_t b_checked = 0, e_checked = 0;
    double b_worst = 0, e_worst = 0;
    CurveCheck b{"b"}, e{"e"};
    std::vector<CurveViolation> b_bad, e_bad;
  };
  const std::size_t m = ends.size();
  const std::size_t blocks = std::min<std::size_t>(m, 64);
  std::vector<Partial> partial(blocks);
  parallel_blocks(m, blocks, workers, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
    Partial& out = partial[blk];
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const Scalar dt = abs(ends[j].t - ends[i].t);
        const Scalar dw = abs(cur.omega(ends[j].interval) - cur.omega(ends[i].interval));
        // eps3 |dw|^(1/3) <= c(k) dt, cubed
        Scalar lhs = eps3_cubed * dw, rhs = c3 * dt * dt * dt;
        ++out.b_checked;
        out.b_worst = std::max(out.b_worst, ratio(lhs, rhs));
        if (lhs > rhs) record(out.b_bad, out.b, "t = " + to_string(ends[i].t) + ", s = " + to_string(ends[j].t));

        NormValue norm = box_norm(pts_inv[i] * pts[j], p);
        NormValue expected = NormValue::of(p.eps1 * dt);
        ++out.e_checked;
        out.e_worst = std::max(out.e_worst, norm.approx() / expected.approx());
        if (norm != expected)
          record(out.e_bad, out.e, "t = " + to_string(ends[i].t) + ", s = " + to_string(ends[j].t) + ": norm^6 " +
                         to_string(norm.sixth_power()));
      }
    }
  });
  for (const Partial& part : partial) {
    b.checked += part.b_checked;
    e.checked += part.e_checked;
    b.worst_ratio = std::max(b.worst_ratio, part.b_worst);
    e.worst_ratio = std::max(e.worst_ratio, part.e_worst);
    b.pass = b.pass && part.b.pass;
    e.pass = e.pass && part.e.pass;
  }
  std::vector<CurveViolation> b_bad, e_bad;
  for (const Partial& part : partial) {
    for (const auto& v : part.b_bad) if (b_bad.size() < kMaxViolations) b_bad.push_back(v);
    for (const auto& v : part.e_bad) if (e_bad.size() < kMaxViolations) e_bad.push_back(v);
  }

  report.checks = {a, b, c, d, e, gap};
  report.violations = std::move(seq);
  report.violations.insert(report.violations.end(), b_bad.begin(), b_bad.end());
  report.violations.insert(report.violations.end(), e_bad.begin(), e_bad.end());
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const CurveViolation& x, const CurveViolation& y) { return x.check < y.check; });
  return report;
}

}  // namespace carnot
