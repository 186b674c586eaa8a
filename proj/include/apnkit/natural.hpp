#pragma once

// Arbitrary-precision naturals on top of GMP, plus the handful of helpers
// every other header leans on.

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace apnkit {

using Natural = mpz_class;
using Rational = mpq_class;

inline Natural natural_from_u64(std::uint64_t v) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
                "apnkit assumes LP64 (unsigned long is 64 bits)");
  return Natural(static_cast<unsigned long>(v));
}

inline std::optional<std::uint64_t> to_u64(const Natural& n) {
  if (sgn(n) < 0 || !mpz_fits_ulong_p(n.get_mpz_t())) return std::nullopt;
  return static_cast<std::uint64_t>(mpz_get_ui(n.get_mpz_t()));
}

inline bool fits_u64(const Natural& n) { return to_u64(n).has_value(); }

// Strict decimal parser: digits only, no sign, no whitespace.
inline Natural parse_natural(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty natural number");
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw std::invalid_argument("not a decimal natural number: '" +
                                  std::string(text) + "'");
    }
  }
  return Natural(std::string(text), 10);
}

inline std::string to_decimal(const Natural& n) { return n.get_str(10); }

inline std::size_t bit_length(const Natural& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline std::size_t decimal_digits(const Natural& n) { return to_decimal(n).size(); }

inline Natural power(const Natural& base, unsigned long exponent) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

inline Natural power_plus_one(const Natural& a, unsigned long n) {
  return power(a, n) + 1;
}

// Bits of a^n without materializing it (upper estimate, exact for powers of 2).
inline double log2_power(const Natural& a, unsigned long n) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, a.get_mpz_t());
  return static_cast<double>(n) * (std::log2(mant) + static_cast<double>(exp2));
}

inline Natural pow_mod(const Natural& base, const Natural& exponent,
                       const Natural& modulus) {
  Natural r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           modulus.get_mpz_t());
  return r;
}

inline Natural gcd(const Natural& x, const Natural& y) {
  Natural r;
  mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return r;
}

inline Natural isqrt(const Natural& n) {
  Natural r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool divides(const Natural& d, const Natural& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

// Exact division; the caller guarantees d | n.
inline Natural exact_quotient(const Natural& n, const Natural& d) {
  Natural q;
  mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Largest k with p^k | n (n > 0, p > 1).
inline unsigned valuation(Natural n, const Natural& p) {
  unsigned k = 0;
  while (sgn(n) != 0 && divides(p, n)) {
    n = exact_quotient(n, p);
    ++k;
  }
  return k;
}

inline double natural_log(const Natural& n) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

// Accepts "p/q", "123", or a plain decimal "0.24".
inline Rational parse_rational(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Natural den = parse_natural(s.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator");
    Rational q(parse_natural(s.substr(0, slash)), den);
    q.canonicalize();
    return q;
  }
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = dot == 0 ? "0" : s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("bad decimal: '" + s + "'");
    Rational q(parse_natural(whole + frac), power(Natural(10), frac.size()));
    q.canonicalize();
    return q;
  }
  return Rational(parse_natural(s));
}

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return to_decimal(q.get_num());
  return to_decimal(q.get_num()) + "/" + to_decimal(q.get_den());
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace apnkit
