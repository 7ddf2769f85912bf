#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "carnot/cones.hpp"

namespace carnot {

/// Columns X1(x), X2(x) of the left-invariant frame in second-type coordinates,
/// as rows: result[i] = {X1(x)_i, X2(x)_i}.
std::vector<std::array<Scalar, 2>> vf_matrix(const GroupPoint& x);

/// x * exp(s h), the flow of the constant horizontal control h for time s.
GroupPoint flow_constant(const GroupPoint& x, const AlgebraVector& h, const Scalar& s);

/// Piecewise-constant horizontal control on [t_0, t_N] started at x0.
struct ControlCurve {
  std::vector<Scalar> breakpoints;       // t_0 < t_1 < ... < t_N
  std::vector<AlgebraVector> controls;   // N horizontal controls
  GroupPoint start;

  /// Throws Error(invalid_argument) on malformed curves.
  void validate() const;
  const GroupDescriptor& group() const { return start.group(); }
  std::size_t segments() const { return controls.size(); }
  /// max |h_i|^2, exact; sqrt gives the Lipschitz constant for the Euclidean horizontal norm
  Scalar max_speed_squared() const;
  /// Exact position at time t in [t_0, t_N].
  GroupPoint at(const Scalar& t) const;
};

struct Polyline {
  std::vector<Scalar> t;
  std::vector<GroupPoint> x;
};

/// Samples at all breakpoints plus `refine` interior points per segment.
Polyline integrate(const ControlCurve& c, unsigned refine = 0);

/// Classical RK4 in doubles on the polynomial vector field; independent oracle
/// for `integrate`. Returns coordinates at every breakpoint.
std::vector<std::vector<double>> integrate_rk4(const ControlCurve& c, unsigned steps_per_segment = 64);

/// delta_{1/s}(f(t)^-1 f(t + s)); negative s uses the algebraic dilation.
GroupPoint pansu_quotient(const std::function<GroupPoint(const Scalar&)>& f, const Scalar& t, const Scalar& s);

struct SpeedBounds {
  Scalar min{frac(1, 4)};
  Scalar max{1};
};

/// Random control curve with every control in the open Euclidean cone of c.
/// Controls are u e + v e_perp with u on the grid of denominator 2^16 in
/// [min, max] and v a grid fraction of a rational bound on the cone width,
/// filtered by `in_euclidean_cone`. Segment lengths lie on the grid of
/// denominator 2^8 in [2^-8, 1]. Deterministic in `seed`.
ControlCurve sample_cone_curve(const ConeSpec& c, std::size_t segments, std::uint64_t seed,
                               const SpeedBounds& speed = {}, const GroupPoint* start = nullptr);

}  // namespace carnot
