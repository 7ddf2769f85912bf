#pragma once

#include <map>
#include <string>
#include <vector>

#include "carnot/scalar.hpp"

namespace carnot {

/// Sparse multivariate polynomial with rational coefficients.
///
/// Used as a ring in place of Scalar to run the group law symbolically: the
/// product formula, BCH series and coordinate changes are all templates over
/// their coefficient ring.
class Polynomial {
 public:
  using Monomial = std::vector<unsigned>;  // exponent per variable; trailing zeros trimmed

  Polynomial() = default;
  Polynomial(const Scalar& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Scalar(c)) {}  // NOLINT(google-explicit-constructor)

  static Polynomial variable(std::size_t index);
  static Polynomial monomial(const Scalar& coeff, Monomial exponents);

  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coefficient(const Monomial& m) const;

  /// Maximal exponent of variable `var` over all terms.
  unsigned degree_in(std::size_t var) const;
  /// Coefficient of var^power, as a polynomial in the remaining variables.
  Polynomial coefficient_of(std::size_t var, unsigned power) const;

  Scalar evaluate(const std::vector<Scalar>& values) const;
  /// Coefficients c_0..c_n of a polynomial in the single variable 0.
  std::vector<Scalar> univariate_coefficients() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  /// Human-readable form over variables named by `names`, e.g. "x1*y2 - 1/2*x1^2".
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void add_term(const Monomial& m, const Scalar& c);
  std::map<Monomial, Scalar> terms_;
};

}  // namespace carnot
