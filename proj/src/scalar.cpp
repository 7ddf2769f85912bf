#include "carnot/scalar.hpp"

#include <cctype>
#include <cmath>

namespace carnot {

Scalar frac(long num, long den) {
  if (den == 0) throw Error(ErrorCode::domain, "zero denominator");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Scalar parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string exp_text(text.substr(e + 1));
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != exp_text.size() || exp_text.empty())
      throw Error(ErrorCode::parse, "malformed exponent in '" + std::string(text) + "'");
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  auto dot = mantissa.find('.');
  if (dot == std::string_view::npos) {
    digits = std::string(mantissa);
  } else {
    digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
    frac_digits = static_cast<long>(mantissa.size() - dot - 1);
  }
  if (!all_digits(digits)) throw Error(ErrorCode::parse, "malformed number '" + std::string(text) + "'");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - frac_digits;
  if (std::labs(shift) > 100000) throw Error(ErrorCode::parse, "exponent out of range in '" + std::string(text) + "'");
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Scalar q = shift >= 0 ? Scalar(num * ten_pow) : Scalar(num, ten_pow);
  q.canonicalize();
  return q;
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::parse, "empty number");

  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);

  std::string_view num_text = text.substr(0, slash);
  std::string_view den_text = text.substr(slash + 1);
  bool negative = false;
  if (!num_text.empty() && (num_text.front() == '-' || num_text.front() == '+')) {
    negative = num_text.front() == '-';
    num_text.remove_prefix(1);
  }
  if (!all_digits(num_text) || !all_digits(den_text))
    throw Error(ErrorCode::parse, "malformed rational '" + std::string(text) + "'");
  mpz_class num(std::string(num_text), 10);
  mpz_class den(std::string(den_text), 10);
  if (den == 0) throw Error(ErrorCode::parse, "zero denominator in '" + std::string(text) + "'");
  if (negative) num = -num;
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Scalar& q) { return q.get_str(10); }

Scalar pow(const Scalar& base, unsigned exponent) {
  Scalar r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  return r;  // already canonical: powers of coprime integers stay coprime
}

Scalar ipow(const Scalar& base, int exponent) {
  if (exponent >= 0) return pow(base, static_cast<unsigned>(exponent));
  if (base == 0) throw Error(ErrorCode::domain, "negative power of zero");
  Scalar inv = 1 / base;
  return pow(inv, static_cast<unsigned>(-exponent));
}

std::optional<Scalar> exact_sqrt(const Scalar& q) {
  if (q < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
  Scalar r;
  mpz_sqrt(r.get_num_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(r.get_den_mpz_t(), q.get_den_mpz_t());
  return r;
}

double to_double(const Scalar& q) {
  // mpq_get_d truncates; good enough for reporting, but avoid underflow to 0
  // for tiny values with huge numerators/denominators by going through mpf.
  mpf_class f(q, 256);
  long exp = 0;
  double mant = mpf_get_d_2exp(&exp, f.get_mpf_t());
  return std::ldexp(mant, static_cast<int>(exp));
}

Scalar random_grid(std::mt19937_64& rng, const Scalar& lo, const Scalar& hi, std::uint64_t den) {
  if (hi < lo || den == 0) throw Error(ErrorCode::invalid_argument, "random_grid: empty range");
  Scalar span = (hi - lo) * Scalar(mpz_class(std::to_string(den)));
  mpz_class steps = span.get_num() / span.get_den();
  std::uniform_int_distribution<std::uint64_t> pick(0, steps.get_ui());
  Scalar q = lo + Scalar(mpz_class(std::to_string(pick(rng))), mpz_class(std::to_string(den)));
  q.canonicalize();
  return q;
}

}  // namespace carnot
