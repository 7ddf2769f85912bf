#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "carnot/metric.hpp"

namespace carnot {

/// Horizontal unit axis e and opening 0 < sigma < 1.
class ConeSpec {
 public:
  /// Throws Error(domain) unless e is horizontal with e1^2 + e2^2 = 1 exactly and 0 < sigma < 1.
  ConeSpec(AlgebraVector axis, Scalar sigma);

  const AlgebraVector& axis() const { return axis_; }
  const Scalar& sigma() const { return sigma_; }
  const GroupDescriptor& group() const { return axis_.group(); }

 private:
  AlgebraVector axis_;
  Scalar sigma_;
};

enum class Decision { outside = 0, inside = 1, undecided = 2 };
const char* to_string(Decision d);

/// Open cone <v, e> > (1 - sigma^2)|v|, decided exactly.
bool in_euclidean_cone(const AlgebraVector& v, const ConeSpec& c);

/// dist(w, N(e)) <= sigma ||w||. Axis cases are exact; otherwise `undecided`
/// when the certified enclosure of the distance straddles sigma ||w||.
Decision in_metric_cone(const GroupPoint& w, const ConeSpec& c, const MetricParams& p, double rel_tol = 0x1p-40);

/// Closure of the X2 cone semigroup. f23:
///   x2 >= 0, x2^3 x4 - 2 x2^2 x3^2 - 6 x2 x3 x5 - 6 x5^2 >= 0
/// engel:
///   x2 >= 0, x4 >= 0, 2 x2 x4 - x3^2 >= 0
bool in_semigroup_closure(const GroupPoint& x);

/// Left-hand sides of the closure inequalities, in the order above.
std::vector<Scalar> semigroup_closure_terms(const GroupPoint& x);

/// in_semigroup_closure(p^-1 q).
bool in_translated_constraint(const GroupPoint& p, const GroupPoint& q);

struct GraphSample {
  Scalar t;
  GroupPoint x;
};

struct LipschitzReport {
  /// certified verdict for sigma = c.sigma()
  Decision verdict = Decision::inside;
  /// max over ordered pairs of dist / ||w|| raised to the sixth power, from
  /// attained (exact) distances; equals the true value when `exact`.
  Scalar sigma_sixth;
  double sigma = 0;
  bool exact = true;
  bool below_one = true;
  /// indices (i, j) of the worst ordered pair, w = x_j^-1 x_i
  std::pair<std::size_t, std::size_t> worst{0, 0};
  std::size_t pairs = 0;
};

/// Checks dist(x_i, x_j N(e)) <= sigma ||x_j^-1 x_i|| over all ordered pairs.
/// Throws Error(invalid_argument) on duplicate parameters.
LipschitzReport is_intrinsic_lipschitz(const std::vector<GraphSample>& points, const ConeSpec& c,
                                       const MetricParams& p, unsigned workers = 0);

struct Opening {
  std::optional<Scalar> exact;
  double approx = 0;  // double precision
};

/// sqrt(1 - sqrt(1 - sigma^2)), 0 <= sigma <= 1.
Opening graph_cone_opening(const Scalar& sigma);

}  // namespace carnot
