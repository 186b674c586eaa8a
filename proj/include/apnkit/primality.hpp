#pragma once

// Miller-Rabin. Below 2^64 the witness set is deterministic; above it a
// fixed-seed sequence of random bases is used and the answer is flagged as
// probabilistic.

#include <array>
#include <cstdint>
#include <random>

#include "apnkit/modular.hpp"
#include "apnkit/natural.hpp"

namespace apnkit {

struct PrimalityResult {
  bool prime = false;
  // True when n >= 2^64 and the "prime" answer rests on random bases.
  bool probabilistic = false;

  explicit operator bool() const { return prime; }
};

// 65 rounds, error < 4^-65 < 2^-128 for composites.
inline constexpr int kProbablePrimeRounds = 65;
inline constexpr std::uint64_t kWitnessSeed = 0x61706e6b6974ULL;

namespace detail {

inline constexpr std::array<std::uint32_t, 15> kSmallPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

inline bool strong_probable_prime_u64(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = pow_mod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool strong_probable_prime(const Natural& n, const Natural& a,
                                  const Natural& d, unsigned long s) {
  Natural x = pow_mod(a, d, n);
  const Natural n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

}  // namespace detail

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : detail::kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 47ULL * 47ULL) return true;
  // Sinclair's seven bases are exact for every n < 2^64.
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL,
                          9780504ULL, 1795265022ULL}) {
    if (!detail::strong_probable_prime_u64(n, a)) return false;
  }
  return true;
}

inline PrimalityResult test_primality(const Natural& n) {
  if (sgn(n) <= 0) return {false, false};
  if (auto small = to_u64(n)) return {is_prime_u64(*small), false};

  for (std::uint32_t p : detail::kSmallPrimes) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return {false, false};
  }
  Natural d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  if (!detail::strong_probable_prime(n, Natural(2), d, s)) return {false, false};

  std::mt19937_64 rng(kWitnessSeed);
  const Natural span = n - 3;
  for (int round = 1; round < kProbablePrimeRounds; ++round) {
    // base in [2, n-2], drawn from 4 fresh 64-bit words.
    Natural r = 0;
    for (int w = 0; w < 4; ++w) {
      r <<= 64;
      r += natural_from_u64(rng());
    }
    const Natural a = r % span + 2;
    if (!detail::strong_probable_prime(n, a, d, s)) return {false, false};
  }
  return {true, true};
}

inline bool is_prime(const Natural& n) { return test_primality(n).prime; }

}  // namespace apnkit
