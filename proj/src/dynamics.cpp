#include "carnot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "carnot/polynomial.hpp"

namespace carnot {

namespace {

// Frame columns as polynomials in the coordinates x_0..x_{n-1}.
struct SymbolicFrame {
  std::vector<std::array<Polynomial, 2>> rows;
};

SymbolicFrame build_frame(const GroupDescriptor& g) {
  const std::size_t n = g.dimension();
  const Polynomial t = Polynomial::variable(n);
  std::vector<Polynomial> x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(Polynomial::variable(i));
  SymbolicFrame f;
  f.rows.resize(n);
  for (std::size_t col = 0; col < 2; ++col) {
    std::vector<Polynomial> y(n, Polynomial(Scalar(0)));
    y[col] = t;
    std::vector<Polynomial> moved = product_formula(g, x, exp_second_kind(g, y));
    for (std::size_t i = 0; i < n; ++i) f.rows[i][col] = moved[i].coefficient_of(n, 1);
  }
  return f;
}

const SymbolicFrame& frame(const GroupDescriptor& g) {
  static const SymbolicFrame f23 = build_frame(GroupDescriptor::f23());
  static const SymbolicFrame engel = build_frame(GroupDescriptor::engel());
  return g.kind() == GroupKind::f23 ? f23 : engel;
}

double evaluate_double(const Polynomial& p, const std::vector<double>& x) {
  double total = 0;
  for (const auto& [mono, coeff] : p.terms()) {
    double term = to_double(coeff);
    for (std::size_t i = 0; i < mono.size(); ++i)
      for (unsigned e = 0; e < mono[i]; ++e) term *= x[i];
    total += term;
  }
  return total;
}

void require_horizontal(const AlgebraVector& h) {
  if (!is_horizontal(h)) throw Error(ErrorCode::invalid_argument, "control must be horizontal");
}

}  // namespace

std::vector<std::array<Scalar, 2>> vf_matrix(const GroupPoint& x) {
  const SymbolicFrame& f = frame(x.group());
  std::vector<std::array<Scalar, 2>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t c = 0; c < 2; ++c) out[i][c] = f.rows[i][c].evaluate(x.coords());
  return out;
}

GroupPoint flow_constant(const GroupPoint& x, const AlgebraVector& h, const Scalar& s) {
  require_same_group(x.group(), h.group());
  require_horizontal(h);
  return x * exp_c2(s * h);
}

void ControlCurve::validate() const {
  if (controls.empty()) throw Error(ErrorCode::invalid_argument, "control curve needs at least one segment");
  if (breakpoints.size() != controls.size() + 1)
    throw Error(ErrorCode::invalid_argument, "control curve needs one more breakpoint than controls");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw Error(ErrorCode::invalid_argument, "breakpoints must increase strictly");
  for (const AlgebraVector& h : controls) {
    require_same_group(h.group(), start.group());
    require_horizontal(h);
  }
}

Scalar ControlCurve::max_speed_squared() const {
  Scalar best = 0;
  for (const AlgebraVector& h : controls) best = std::max<Scalar>(best, h[0] * h[0] + h[1] * h[1]);
  return best;
}

GroupPoint ControlCurve::at(const Scalar& t) const {
  validate();
  if (t < breakpoints.front() || t > breakpoints.back())
    throw Error(ErrorCode::domain, "time " + to_string(t) + " outside the control interval");
  GroupPoint x = start;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    if (t <= breakpoints[i + 1]) return flow_constant(x, controls[i], t - breakpoints[i]);
    x = flow_constant(x, controls[i], breakpoints[i + 1] - breakpoints[i]);
  }
  return x;
}

Polyline integrate(const ControlCurve& c, unsigned refine) {
  c.validate();
  Polyline out;
  GroupPoint x = c.start;
  out.t.push_back(c.breakpoints.front());
  out.x.push_back(x);
  for (std::size_t i = 0; i < c.controls.size(); ++i) {
    const Scalar t0 = c.breakpoints[i], len = c.breakpoints[i + 1] - t0;
    for (unsigned r = 1; r <= refine; ++r) {
      Scalar s = len * r / (refine + 1);
      out.t.push_back(t0 + s);
      out.x.push_back(flow_constant(x, c.controls[i], s));
    }
    x = flow_constant(x, c.controls[i], len);
    out.t.push_back(c.breakpoints[i + 1]);
    out.x.push_back(x);
  }
  return out;
}

std::vector<std::vector<double>> integrate_rk4(const ControlCurve& c, unsigned steps_per_segment) {
  c.validate();
  if (steps_per_segment == 0) throw Error(ErrorCode::invalid_argument, "need at least one step");
  const SymbolicFrame& f = frame(c.group());
  const std::size_t n = c.group().dimension();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = to_double(c.start[i]);
  std::vector<std::vector<double>> out{x};
  for (std::size_t seg = 0; seg < c.controls.size(); ++seg) {
    const double h1 = to_double(c.controls[seg][0]), h2 = to_double(c.controls[seg][1]);
    auto field = [&](const std::vector<double>& y) {
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = h1 * evaluate_double(f.rows[i][0], y) + h2 * evaluate_double(f.rows[i][1], y);
      return d;
    };
    auto axpy = [&](const std::vector<double>& y, double a, const std::vector<double>& k) {
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = y[i] + a * k[i];
      return r;
    };
    const double dt = to_double(c.breakpoints[seg + 1] - c.breakpoints[seg]) / steps_per_segment;
    for (unsigned s = 0; s < steps_per_segment; ++s) {
      auto k1 = field(x);
      auto k2 = field(axpy(x, dt / 2, k1));
      auto k3 = field(axpy(x, dt / 2, k2));
      auto k4 = field(axpy(x, dt, k3));
      for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    out.push_back(x);
  }
  return out;
}

GroupPoint pansu_quotient(const std::function<GroupPoint(const Scalar&)>& f, const Scalar& t, const Scalar& s) {
  if (s == 0) throw Error(ErrorCode::domain, "Pansu quotient needs s != 0");
  return dilate_algebraic(1 / s, inverse(f(t)) * f(t + s));
}

ControlCurve sample_cone_curve(const ConeSpec& c, std::size_t segments, std::uint64_t seed, const SpeedBounds& speed,
                               const GroupPoint* start) {
  if (segments == 0) throw Error(ErrorCode::invalid_argument, "need at least one segment");
  if (speed.min <= 0 || speed.max < speed.min) throw Error(ErrorCode::domain, "speed bounds must satisfy 0 < min <= max");
  const GroupDescriptor& g = c.group();
  const AlgebraVector& e = c.axis();
  const AlgebraVector e_perp = horizontal(g, -e[1], e[0]);
  // tan of the half-opening, k = 1 - sigma^2: sqrt(1 - k^2) / k, rounded up to a rational
  const Scalar k = 1 - c.sigma() * c.sigma();
  const double tan_half = std::sqrt(1 - to_double(k * k)) / to_double(k);
  const Scalar width = Scalar(tan_half * (1 + 1e-9));

  std::mt19937_64 rng(seed);
  ControlCurve curve{{Scalar(0)}, {}, start ? *start : identity(g)};
  constexpr std::uint64_t kGrid = 1u << 16;
  for (std::size_t i = 0; i < segments; ++i) {
    for (;;) {
      Scalar u = random_grid(rng, speed.min, speed.max, kGrid);
      Scalar v = u * width * random_grid(rng, -1, 1, kGrid);
      AlgebraVector h = u * e + v * e_perp;
      if (in_euclidean_cone(h, c)) {
        curve.controls.push_back(std::move(h));
        break;
      }
    }
    curve.breakpoints.push_back(curve.breakpoints.back() + random_grid(rng, frac(1, 256), 1, 256));
  }
  return curve;
}

}  // namespace carnot
