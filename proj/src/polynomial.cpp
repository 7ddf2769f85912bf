#include "carnot/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace carnot {

namespace {

void trim(Polynomial::Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

}  // namespace

Polynomial::Polynomial(const Scalar& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::variable(std::size_t index) {
  Monomial m(index + 1, 0);
  m[index] = 1;
  return monomial(1, std::move(m));
}

Polynomial Polynomial::monomial(const Scalar& coeff, Monomial exponents) {
  Polynomial p;
  trim(exponents);
  p.add_term(exponents, coeff);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Scalar Polynomial::coefficient(const Monomial& m) const {
  Monomial key = m;
  trim(key);
  auto it = terms_.find(key);
  return it == terms_.end() ? Scalar(0) : it->second;
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_)
    if (var < m.size()) d = std::max(d, m[var]);
  return d;
}

Polynomial Polynomial::coefficient_of(std::size_t var, unsigned power) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    unsigned e = var < m.size() ? m[var] : 0;
    if (e != power) continue;
    Monomial rest = m;
    if (var < rest.size()) rest[var] = 0;
    trim(rest);
    out.add_term(rest, c);
  }
  return out;
}

Scalar Polynomial::evaluate(const std::vector<Scalar>& values) const {
  Scalar total = 0;
  for (const auto& [m, c] : terms_) {
    if (m.size() > values.size()) throw Error(ErrorCode::invalid_argument, "polynomial: too few values");
    Scalar term = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) term *= pow(values[i], m[i]);
    total += term;
  }
  return total;
}

std::vector<Scalar> Polynomial::univariate_coefficients() const {
  std::vector<Scalar> coeffs(degree_in(0) + 1, Scalar(0));
  for (const auto& [m, c] : terms_) {
    if (m.size() > 1) throw Error(ErrorCode::invalid_argument, "polynomial is not univariate");
    coeffs[m.empty() ? 0 : m[0]] += c;
  }
  return coeffs;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Polynomial::Monomial m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
      for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial out;
  for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
  return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Scalar mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool has_var = std::any_of(m.begin(), m.end(), [](unsigned e) { return e != 0; });
    bool printed = false;
    if (mag != 1 || !has_var) {
      os << mag.get_str();
      printed = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (printed) os << "*";
      os << (i < names.size() ? names[i] : "v" + std::to_string(i));
      if (m[i] > 1) os << "^" << m[i];
      printed = true;
    }
  }
  return os.str();
}

}  // namespace carnot
