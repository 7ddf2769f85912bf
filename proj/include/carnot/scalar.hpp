#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

/// Exact rational number. Every coordinate, parameter and time value in the
/// library is a Scalar; floating point only appears in reports.
using Scalar = mpq_class;

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  group_mismatch = 3,
  domain = 4,
  unsupported = 5,
  internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Canonical n/d with d > 0.
Scalar frac(long num, long den = 1);

/// Accepts "n", "n/d", "-n/d" and finite decimals such as "0.25" or "-1.5e-3".
Scalar parse_scalar(std::string_view text);
std::string to_string(const Scalar& q);

Scalar pow(const Scalar& base, unsigned exponent);
/// base^exponent for any integer exponent; base must be nonzero when exponent < 0.
Scalar ipow(const Scalar& base, int exponent);

/// Rational square root when q is the square of a rational.
std::optional<Scalar> exact_sqrt(const Scalar& q);

double to_double(const Scalar& q);

inline int sign(const Scalar& q) { return sgn(q); }

/// Uniform draw from the grid {lo + i/den} intersected with [lo, hi].
Scalar random_grid(std::mt19937_64& rng, const Scalar& lo, const Scalar& hi, std::uint64_t den);

}  // namespace carnot
