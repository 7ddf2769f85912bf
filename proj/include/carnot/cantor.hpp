#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carnot/metric.hpp"

namespace carnot {

struct Interval {
  Scalar a, b;  // closed [a, b]
  Scalar length() const { return b - a; }
  Scalar center() const { return (a + b) / 2; }
  bool contains(const Scalar& t) const { return a <= t && t <= b; }
};

/// Level k of the construction: 2^(k-1) increasing closed intervals.
/// Level k+1 removes the open gap of radius 8^-k around each center.
struct CantorLevel {
  unsigned k = 1;
  std::vector<Interval> intervals;

  Scalar length() const;
  /// 0-based index of the interval containing t.
  std::optional<std::size_t> locate(const Scalar& t) const;
};

/// Levels 1..k_max (index 0 holds level 1). Throws Error(domain) for k_max = 0.
std::vector<CantorLevel> build_levels(unsigned k_max);

/// Total length of level k, summed from the intervals.
Scalar measure(unsigned k);
/// 2/3 + 4^-(k-1) / 3.
Scalar measure_closed_form(unsigned k);
/// Length of the intersection over all levels.
Scalar measure_limit();

/// Gap radius removed when passing from level k to k+1, 8^-k.
Scalar gap_radius(unsigned k);

/// omega(k, j) in units of eps3^-3, 1-based j:
///   omega(1, 1) = 0, omega(k+1, 2j-1) = omega(k, j), omega(k+1, 2j) = omega(k, j) - 8^(-6k).
/// Throws Error(invalid_argument) when j is out of range.
Scalar omega_hat(unsigned k, std::uint64_t j);
/// omega_hat(k, j) * eps3^-3.
Scalar omega(unsigned k, std::uint64_t j, const Scalar& eps3);

/// -x = sum tau_l 8^(-6l), l = 1..k-1, tau in {0, 1}.
bool in_omega_set(unsigned k, const Scalar& x);

/// (8^-1 - 8^-k) / (1 - 8^-1); tends to 1/7.
Scalar holder_constant(unsigned k);
Scalar holder_constant_limit();

/// The curve iterate gamma^k on level k: gamma^k(t) = (0, t, 0, omega(k, j(t)), 0).
class CurveIterate {
 public:
  CurveIterate(unsigned k, Scalar eps3, const GroupDescriptor& g = GroupDescriptor::f23());

  unsigned depth() const { return level_.k; }
  const Scalar& eps3() const { return eps3_; }
  const GroupDescriptor& group() const { return *group_; }
  const CantorLevel& level() const { return level_; }
  /// eps3-free plateau values, one per interval.
  const std::vector<Scalar>& omega_hat() const { return omega_hat_; }
  Scalar omega(std::size_t index) const;

  /// Throws Error(domain) naming the gap when t is not in the level.
  GroupPoint operator()(const Scalar& t) const;

 private:
  const GroupDescriptor* group_;
  CantorLevel level_;
  Scalar eps3_;
  std::vector<Scalar> omega_hat_;
};

GroupPoint gamma_k(const Scalar& t, unsigned k, const Scalar& eps3, const GroupDescriptor& g = GroupDescriptor::f23());

/// A point of the limit set given by its address: digits[i] is the choice
/// (0 left, 1 right) made when passing from level i+1 to i+2; all later
/// digits equal `tail`.
struct CantorPoint {
  std::vector<std::uint8_t> digits;
  std::uint8_t tail = 0;

  std::uint8_t digit(std::size_t i) const { return i < digits.size() ? digits[i] : tail; }
  /// 0-based interval index at level k.
  std::uint64_t index(unsigned k) const;
  /// Exact parameter value (the address is eventually constant).
  Scalar value() const;
  static CantorPoint left_end() { return {{}, 0}; }
  static CantorPoint right_end() { return {{}, 1}; }
};

struct LimitValue {
  GroupPoint point;    // gamma^k(t)
  Scalar error_bound;  // |gamma_4(t) - gamma_4^k(t)| <= error_bound
  Scalar exact_gamma4; // exact value of gamma_4(t) (eventually constant address)
};

LimitValue gamma_limit(const CantorPoint& t, unsigned k_trunc, const Scalar& eps3,
                       const GroupDescriptor& g = GroupDescriptor::f23());

struct CurveViolation {
  std::string check;
  std::string detail;
};

struct CurveCheck {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  /// largest lhs / rhs over checked items (<= 1 passes), 0 when nothing to compare
  double worst_ratio = 0;
};

struct CurveReport {
  unsigned depth = 0;
  Scalar eps3;
  MetricParams params;
  std::vector<CurveCheck> checks;  // a..e, gap
  std::vector<CurveViolation> violations;
  bool pass() const;
};

/// Exact checks on level k >= 2 over all interval endpoints:
///  a  0 <= gamma^(k-1) - gamma^k <= eps3^-3 8^(-6(k-1))
///  b  eps3 |gamma_4^k(s) - gamma_4^k(t)|^(1/3) <= c(k) |s - t|
///  c  omega(k, j) lies in the omega set
///  d  omega(k, i) - omega(k, j) >= eps3^-3 8^(-6(k-1)) for i < j
///  e  ||gamma^k(t)^-1 gamma^k(s)|| = eps1 |s - t|
///  gap  limit curve drop across distinct level-k intervals >= 5 eps3^-3 8^(-6k)
CurveReport verify_iterate(unsigned k, const MetricParams& p, unsigned workers = 0,
                           const GroupDescriptor& g = GroupDescriptor::f23());

}  // namespace carnot
