#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

/// Weights of the smooth-box quasi-norm. Defaults: eps1 = 1, eps2 = eps3 = 1/4.
struct MetricParams {
  Scalar eps1{1};
  Scalar eps2{frac(1, 4)};
  Scalar eps3{frac(1, 4)};

  /// Throws Error(domain) unless every weight is strictly positive.
  void validate() const;
};

/// Value of max{eps1|g1|, eps2|g2|^(1/2), eps3|g3|^(1/3)}.
///
/// Each term is kept as its exact sixth power, which is rational for both
/// groups (the second layer is one-dimensional), so ordering and equality are
/// decided without roots. `approx()` is for reporting only.
class NormValue {
 public:
  enum Term { horizontal = 0, second_layer = 1, third_layer = 2 };

  NormValue() = default;
  explicit NormValue(std::array<Scalar, 3> term_sixth_powers);
  /// The norm whose value is the nonnegative rational r.
  static NormValue of(const Scalar& r);

  const std::array<Scalar, 3>& term_sixth_powers() const { return terms_; }
  const Scalar& sixth_power() const { return terms_[argmax_]; }
  /// Index of the largest term; ties resolve to the lowest layer.
  Term argmax() const { return argmax_; }
  bool is_zero() const { return sixth_power() == 0; }

  /// Exact value when the sixth power is the sixth power of a rational.
  std::optional<Scalar> exact_value() const;
  double approx() const;

  /// Sign of (this - r) for a nonnegative rational r.
  int compare(const Scalar& r) const;
  /// The value s * this, s >= 0.
  NormValue scaled(const Scalar& s) const;

  friend std::strong_ordering operator<=>(const NormValue& a, const NormValue& b) {
    int c = cmp(a.sixth_power(), b.sixth_power());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  friend bool operator==(const NormValue& a, const NormValue& b) { return a.sixth_power() == b.sixth_power(); }

 private:
  std::array<Scalar, 3> terms_{};
  Term argmax_ = horizontal;
};

NormValue box_norm(const GroupPoint& x, const MetricParams& p);
/// d(x, y) = ||x^-1 y||.
NormValue distance(const GroupPoint& x, const GroupPoint& y, const MetricParams& p);

/// Result of inf over lambda of d(w, exp(lambda e)).
struct SubgroupDistance {
  /// True when `value` is the exact infimum.
  bool exact = false;
  NormValue value;
  /// Certified enclosure lower <= dist <= upper. For exact results both equal value.approx().
  double lower = 0;
  double upper = 0;
  /// Exact rational lower bound for dist^12.
  Scalar lower_twelfth;
  /// `attained` is the norm at `argmin`, an upper bound that is itself exact.
  NormValue attained;
  Scalar argmin;
};

/// Distance from w to the one-parameter subgroup exp(R e), e horizontal and nonzero.
/// Closed form when w lies on the subgroup or when e is parallel to X2 and w has
/// the shape (0, a, 0, b, 0); otherwise interval branch-and-bound over lambda to
/// relative tolerance `rel_tol`.
SubgroupDistance dist_to_subgroup(const GroupPoint& w, const AlgebraVector& e, const MetricParams& p,
                                  double rel_tol = 0x1p-40);

struct CalibrationWitness {
  std::vector<Scalar> x, y, z;
  double quotient = 0;
};

struct CalibrationReport {
  MetricParams params;
  std::string group;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_quotient = 0;
  std::size_t violations = 0;  // samples with quotient > 1
  std::vector<CalibrationWitness> worst;
};

/// d(x,z) / (d(x,y) + d(y,z)) as a float.
double triangle_quotient(const GroupPoint& x, const GroupPoint& y, const GroupPoint& z, const MetricParams& p);

/// Samples triples x, y = x d_r(u), z = y d_s(v) with u, v in the unit box and
/// dyadic scales r, s in [2^-8, 1] (u, v horizontal half of the time), and records the largest triangle
/// quotient. Trials are split across workers with per-trial seeds, so the
/// report depends only on (group, params, trials, seed).
CalibrationReport calibrate(const GroupDescriptor& g, const MetricParams& p, std::size_t trials, std::uint64_t seed,
                            unsigned workers = 0, std::size_t keep_worst = 5);

}  // namespace carnot
