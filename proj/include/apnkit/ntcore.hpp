#pragma once

// Number-theoretic primitives shared by the chain, certificate and search
// layers: divisor sums, multiplicative orders, squarefree splits and the
// exact-once divisibility test.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "apnkit/factor.hpp"
#include "apnkit/natural.hpp"
#include "apnkit/primality.hpp"
#include "apnkit/verdict.hpp"

namespace apnkit {

// sigma(N) from a factorization of N.
inline Natural sigma(const Factorization& f) {
  Natural s = 1;
  for (const auto& e : f.entries()) {
    // 1 + p + ... + p^k = (p^(k+1) - 1) / (p - 1)
    s *= exact_quotient(power(e.prime, e.exponent + 1) - 1, e.prime - 1);
  }
  return s;
}

// Abundancy sigma(N)/N as a reduced fraction, built prime by prime.
inline Rational sigma_ratio(const Factorization& f) {
  Rational r = 1;
  for (const auto& e : f.entries()) {
    const Natural pk = power(e.prime, e.exponent);
    Rational local(exact_quotient(pk * e.prime - 1, e.prime - 1), pk);
    local.canonicalize();
    r *= local;
  }
  return r;
}

// m with sigma(N) = m N, if any.
inline std::optional<Natural> multiperfect_class(const Factorization& f) {
  const Rational r = sigma_ratio(f);
  if (r.get_den() != 1) return std::nullopt;
  return r.get_num();
}

// Least k >= 1 with a^k = 1 (mod p), found by factoring p - 1 and stripping
// prime factors while the power stays 1.
inline OrInconclusive<Natural> multiplicative_order(const Natural& a, const Natural& p,
                                                    const FactorBudget& budget = {}) {
  if (!is_prime(p)) throw std::invalid_argument("multiplicative_order: modulus must be prime");
  if (divides(p, a)) throw std::invalid_argument("multiplicative_order: gcd(a, p) != 1");
  if (p == 2) return Natural(1);

  const FactorResult group = factor(p - 1, budget);
  if (!group.complete()) {
    return Inconclusive{"cannot factor p-1 for p=" + to_decimal(p) + ": " + group.reason};
  }
  Natural order = p - 1;
  const Natural base = a % p;
  for (const auto& e : group.found.entries()) {
    for (unsigned i = 0; i < e.exponent; ++i) {
      const Natural candidate = exact_quotient(order, e.prime);
      if (pow_mod(base, candidate, p) != 1) break;
      order = candidate;
    }
  }
  return order;
}

struct SquarefreeSplit {
  Natural kernel;  // product of primes with odd exponent
  Natural root;    // kernel * root^2 == N

  friend bool operator==(const SquarefreeSplit&, const SquarefreeSplit&) = default;
};

inline SquarefreeSplit squarefree_split(const Factorization& f) {
  SquarefreeSplit s{1, 1};
  for (const auto& e : f.entries()) {
    if (e.exponent % 2 == 1) s.kernel *= e.prime;
    s.root *= power(e.prime, e.exponent / 2);
  }
  return s;
}

// omega of the squarefree kernel, without rebuilding it.
inline std::size_t kernel_omega(const Factorization& f) {
  std::size_t k = 0;
  for (const auto& e : f.entries()) k += e.exponent % 2;
  return k;
}

struct EulerForm {
  Natural prime;
  Natural root;  // N == prime * root^2
};

// N = p x^2 with p prime: the shape an odd (4m+2)-perfect number must have.
inline std::optional<EulerForm> euler_form_check(const Factorization& f) {
  const SquarefreeSplit s = squarefree_split(f);
  if (kernel_omega(f) != 1) return std::nullopt;
  return EulerForm{s.kernel, s.root};
}

// (a^n + 1) mod p^2, by modular exponentiation only.
inline Natural power_plus_one_residue(const Natural& a, const Natural& n, const Natural& modulus) {
  Natural r = pow_mod(a, n, modulus) + 1;
  if (r == modulus) r = 0;
  return r;
}

// p | a^n + 1 and p^2 does not. Never materializes a^n + 1.
inline bool exact_once(const Natural& a, const Natural& n, const Natural& p) {
  if (p < 3 || !divides(Natural(2), p - 1)) {
    throw std::invalid_argument("exact_once: p must be an odd prime");
  }
  if (divides(p, a)) throw std::invalid_argument("exact_once: gcd(a, p) != 1");
  const Natural residue = power_plus_one_residue(a, n, p * p);
  return residue != 0 && divides(p, residue);
}

inline bool is_perfect_square(const Natural& n) {
  if (sgn(n) < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// Whether (a^f + 1)/(a + 1) is a square. Ljunggren: never, for a >= 2 and odd f >= 3.
inline bool ljunggren_quotient_square(const Natural& a, unsigned long f) {
  if (a < 2) throw std::invalid_argument("ljunggren_quotient_square: a must be >= 2");
  if (f < 3 || f % 2 == 0) {
    throw std::invalid_argument("ljunggren_quotient_square: f must be odd and >= 3");
  }
  return is_perfect_square(exact_quotient(power_plus_one(a, f), a + 1));
}

}  // namespace apnkit
