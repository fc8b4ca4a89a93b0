#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsrsr {

/// Error raised for malformed inputs (numbers, files, configs).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

using Rational = mpq_class;

// Parses "p", "p/q", or a decimal string ("1.25", ".35", "-0.5") into an
// exact rational. Decimals become exact fractions: ".35" -> 7/20.
Rational parse_rational(std::string_view text);

// Canonical serialization: "p" when the denominator is 1, else "p/q".
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

// gmpxx has no long long constructors; these avoid the ambiguity (long is
// 64-bit on every platform this builds for).
inline mpz_class to_mpz(long long v) { return mpz_class(static_cast<long>(v)); }

inline Rational make_rational(long long num, long long den = 1) {
  Rational r(to_mpz(num), to_mpz(den));
  r.canonicalize();
  return r;
}

}  // namespace qsrsr
