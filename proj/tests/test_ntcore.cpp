#include <gtest/gtest.h>

#include <random>

#include "apnkit/ntcore.hpp"
#include "oracles.hpp"

using namespace apnkit;

namespace {

Factorization must_factor(const Natural& n) {
  const FactorResult r = factor(n);
  EXPECT_TRUE(r.complete()) << to_decimal(n) << ": " << r.reason;
  return r.found;
}

Factorization must_factor(std::uint64_t n) { return must_factor(natural_from_u64(n)); }

std::vector<PrimePower> pp(std::initializer_list<std::pair<unsigned long, unsigned>> list) {
  std::vector<PrimePower> out;
  for (const auto& [p, e] : list) out.push_back({Natural(p), e});
  return out;
}

}  // namespace

TEST(Natural, ParseAndFormat) {
  EXPECT_EQ(parse_natural("134217729"), Natural(134217729));
  EXPECT_EQ(to_decimal(parse_natural("2879347902817")), "2879347902817");
  EXPECT_THROW(parse_natural(""), std::invalid_argument);
  EXPECT_THROW(parse_natural("-3"), std::invalid_argument);
  EXPECT_THROW(parse_natural("12a"), std::invalid_argument);
  EXPECT_EQ(parse_rational("1/9000"), Rational(1, 9000));
  EXPECT_EQ(parse_rational("0.24"), Rational(6, 25));
  EXPECT_EQ(parse_rational("2"), Rational(2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x/2"), std::invalid_argument);
}

TEST(Budget, ParsesOverrides) {
  const FactorBudget b = parse_budget("rho=100,trial=50");
  EXPECT_EQ(b.trial_limit, 50u);
  EXPECT_EQ(b.rho_iterations, 100u);
  EXPECT_EQ(b.overall_op_cap, FactorBudget{}.overall_op_cap);
  EXPECT_THROW(parse_budget("rho=0"), std::invalid_argument);
  EXPECT_THROW(parse_budget("speed=3"), std::invalid_argument);
  EXPECT_THROW(parse_budget("rho"), std::invalid_argument);
  EXPECT_THROW(parse_budget("rho=1x"), std::invalid_argument);
}

TEST(IsPrime, KnownValues) {
  EXPECT_TRUE(is_prime(Natural(87211)));
  EXPECT_FALSE(is_prime(Natural(1)));
  EXPECT_FALSE(is_prime(Natural(341)));
  EXPECT_FALSE(is_prime(Natural(0)));
  EXPECT_TRUE(is_prime(Natural(2)));
}

TEST(IsPrime, AgreesWithTrialDivisionBelow200000) {
  for (std::uint64_t n = 0; n < 200000; ++n) {
    ASSERT_EQ(is_prime_u64(n), oracle::is_prime(n)) << n;
  }
}

TEST(IsPrime, StrongPseudoprimesAndLargeValues) {
  // Strong pseudoprimes to several small bases.
  for (std::uint64_t n : {2047ull, 1373653ull, 25326001ull, 3215031751ull, 2152302898747ull,
                          3474749660383ull, 341550071728321ull, 3825123056546413051ull}) {
    EXPECT_FALSE(is_prime_u64(n)) << n;
  }
  EXPECT_TRUE(is_prime_u64(18446744073709551557ull));  // largest prime below 2^64
  EXPECT_FALSE(is_prime_u64(18446744073709551615ull));

  const Natural m61 = power(Natural(2), 61) - 1;
  const auto small = test_primality(m61);
  EXPECT_TRUE(small.prime);
  EXPECT_FALSE(small.probabilistic);

  const auto m89 = test_primality(power(Natural(2), 89) - 1);
  EXPECT_TRUE(m89.prime);
  EXPECT_TRUE(m89.probabilistic);
  EXPECT_FALSE(is_prime(power(Natural(2), 67) - 1));
  EXPECT_FALSE(is_prime(Natural(2879347902817) * Natural(354689)));
}

TEST(Factor, KnownValues) {
  EXPECT_EQ(must_factor(1025), Factorization::from_entries(pp({{5, 2}, {41, 1}})));
  EXPECT_TRUE(must_factor(1).empty());
  EXPECT_EQ(must_factor(1).value(), 1);
  EXPECT_EQ(must_factor(134217729), Factorization::from_entries(pp({{3, 4}, {19, 1}, {87211, 1}})));
}

TEST(Factor, LargerValues) {
  const Natural n = oracle::power_plus_one(2, 68);
  const auto f = must_factor(n);
  EXPECT_EQ(f, Factorization::from_entries(pp({{17, 2}, {354689, 1}, {2879347902817ul, 1}})));

  // Two primes above the trial range, beyond 63 bits.
  const Natural p = Natural("4294967311"), q = Natural("1099511627791");
  const auto g = must_factor(p * q * p);
  ASSERT_EQ(g.omega(), 2u);
  EXPECT_EQ(g.exponent_of(p), 2u);
  EXPECT_EQ(g.exponent_of(q), 1u);

  // Perfect power of a prime above the trial range.
  const auto h = must_factor(power(Natural(1000003), 5));
  ASSERT_EQ(h.omega(), 1u);
  EXPECT_EQ(h.entries()[0].exponent, 5u);
}

TEST(Factor, MatchesTrialDivisionOracle) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 600; ++i) {
    const std::uint64_t n = 1 + rng() % 1'000'000'000ull;
    const auto f = must_factor(n);
    const auto want = oracle::trial_factor(n);
    ASSERT_EQ(f.omega(), want.size()) << n;
    for (const auto& e : f.entries()) {
      ASSERT_EQ(want.at(*to_u64(e.prime)), e.exponent) << n;
    }
  }
}

TEST(Factor, RemultiplicationIsIdentity) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 400; ++i) {
    const Natural n = natural_from_u64(rng() >> (rng() % 40));
    if (n == 0) continue;
    const auto f = must_factor(n);
    Natural product = 1;
    for (const auto& e : f.entries()) {
      ASSERT_TRUE(is_prime(e.prime));
      product *= power(e.prime, e.exponent);
    }
    ASSERT_EQ(product, n);
    ASSERT_EQ(f.value(), n);
  }
}

TEST(Factor, BudgetExhaustionKeepsPartialResult) {
  const Natural p = Natural("1099511627791"), q = Natural("1099511627689");
  const Natural n = 3 * 3 * 7 * p * q;
  FactorBudget tiny;
  tiny.rho_iterations = 8;
  tiny.overall_op_cap = 64;
  const FactorResult r = factor(n, tiny);
  EXPECT_FALSE(r.complete());
  EXPECT_FALSE(r.reason.empty());
  EXPECT_EQ(r.found.value() * r.cofactor, n);
  EXPECT_EQ(r.found.exponent_of(3), 2u);
  EXPECT_EQ(r.found.exponent_of(7), 1u);
  EXPECT_EQ(gcd(r.cofactor, r.found.value()), 1);
}

TEST(Factor, CacheMatchesDirectCalls) {
  FactorCache cache;
  const Natural n = oracle::power_plus_one(2, 50);
  const FactorResult a = cache.get(n);
  const FactorResult b = cache.get(n);
  EXPECT_EQ(a.found, factor(n).found);
  EXPECT_EQ(a.found, b.found);
  EXPECT_EQ(cache.size(), 1u);
}

TEST(Factorization, RejectsInvalidEntries) {
  EXPECT_THROW(Factorization::from_entries(pp({{5, 1}, {3, 1}})), std::invalid_argument);
  EXPECT_THROW(Factorization::from_entries(pp({{4, 1}})), std::invalid_argument);
  EXPECT_THROW(Factorization::from_entries(pp({{3, 0}})), std::invalid_argument);
}

TEST(SigmaRatio, KnownValues) {
  EXPECT_EQ(sigma_ratio(must_factor(28)), Rational(2));
  EXPECT_EQ(sigma_ratio(must_factor(1)), Rational(1));
  Rational want(Natural(121) * 20 * 87212, Natural(81) * 19 * 87211);
  want.canonicalize();
  const Rational got = sigma_ratio(must_factor(134217729));
  EXPECT_EQ(got, want);
  EXPECT_NEAR(to_double(got), 1.5724676730, 1e-9);
}

TEST(SigmaRatio, MatchesDivisorEnumeration) {
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    const auto f = must_factor(n);
    ASSERT_EQ(sigma(f), natural_from_u64(oracle::sigma(n))) << n;
    Rational want(natural_from_u64(oracle::sigma(n)), natural_from_u64(n));
    want.canonicalize();
    ASSERT_EQ(sigma_ratio(f), want) << n;
  }
}

TEST(SigmaRatio, MultiplicativeOnCoprimePairs) {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 300) {
    const std::uint64_t m = 1 + rng() % 1'000'000, n = 1 + rng() % 1'000'000;
    if (gcd(natural_from_u64(m), natural_from_u64(n)) != 1) continue;
    const Natural mn = natural_from_u64(m) * natural_from_u64(n);
    ASSERT_EQ(sigma_ratio(must_factor(mn)), sigma_ratio(must_factor(m)) * sigma_ratio(must_factor(n)));
    ++checked;
  }
}

TEST(MultiperfectClass, KnownValues) {
  EXPECT_EQ(multiperfect_class(must_factor(28)), Natural(2));
  EXPECT_EQ(multiperfect_class(must_factor(6)), Natural(2));
  EXPECT_FALSE(multiperfect_class(must_factor(1025)).has_value());
  EXPECT_EQ(sigma(must_factor(1025)), 1302);
  EXPECT_EQ(multiperfect_class(must_factor(120)), Natural(3));
  EXPECT_EQ(multiperfect_class(must_factor(1)), Natural(1));
}

TEST(MultiplicativeOrder, KnownValues) {
  auto order = [](unsigned long a, unsigned long p) {
    const auto r = multiplicative_order(Natural(a), Natural(p));
    const Natural* k = value_if(r);
    EXPECT_NE(k, nullptr);
    return k ? *k : Natural(0);
  };
  EXPECT_EQ(order(2, 3), 2);
  EXPECT_EQ(order(2, 41), 20);
  EXPECT_EQ(order(2, 87211), 54);
  EXPECT_EQ(order(2, 2879347902817ul), 136);
  EXPECT_THROW(multiplicative_order(Natural(2), Natural(341)), std::invalid_argument);
  EXPECT_THROW(multiplicative_order(Natural(6), Natural(3)), std::invalid_argument);
}

TEST(MultiplicativeOrder, MatchesNaiveOrderAndDividesGroupOrder) {
  for (std::uint64_t p = 3; p < 3000; ++p) {
    if (!oracle::is_prime(p)) continue;
    for (std::uint64_t a = 2; a <= 12; ++a) {
      if (a % p == 0) continue;
      const auto r = multiplicative_order(natural_from_u64(a), natural_from_u64(p));
      const Natural k = *value_if(r);
      ASSERT_EQ(k, natural_from_u64(oracle::order(a, p))) << a << " mod " << p;
      ASSERT_TRUE(divides(k, natural_from_u64(p - 1)));
      ASSERT_EQ(pow_mod(Natural(a), k, Natural(p)), 1);
      const auto fk = factor(k);
      for (const auto& e : fk.found.entries()) {
        ASSERT_NE(pow_mod(Natural(a), k / e.prime, Natural(p)), 1);
      }
    }
  }
}

TEST(MultiplicativeOrder, InconclusiveWhenGroupOrderResistsFactoring) {
  // p - 1 = 2 * 3 * q1 * q2 with q1, q2 around 2^40, and a budget too small for them.
  const Natural q1("1099511627791"), q2("1099511628401");
  Natural p = 0;
  for (unsigned long k = 1; k < 2000; ++k) {
    const Natural cand = 2 * k * q1 * q2 + 1;
    if (is_prime(cand)) {
      p = cand;
      break;
    }
  }
  ASSERT_NE(p, 0);
  FactorBudget tiny;
  tiny.rho_iterations = 4;
  tiny.overall_op_cap = 16;
  const auto r = multiplicative_order(Natural(3), p, tiny);
  EXPECT_TRUE(std::holds_alternative<Inconclusive>(r));
}

TEST(SquarefreeSplit, KnownValues) {
  EXPECT_EQ(squarefree_split(must_factor(1025)), (SquarefreeSplit{41, 5}));
  EXPECT_EQ(squarefree_split(must_factor(36)), (SquarefreeSplit{1, 6}));
  EXPECT_EQ(squarefree_split(must_factor(32769)), (SquarefreeSplit{3641, 3}));
}

TEST(SquarefreeSplit, KernelTimesRootSquaredRandom) {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 10000; ++i) {
    const Natural n = natural_from_u64(1 + rng() % 1'000'000'000'000ull);
    const auto f = must_factor(n);
    const auto s = squarefree_split(f);
    ASSERT_EQ(s.kernel * s.root * s.root, n);
    const auto fk = must_factor(s.kernel);
    for (const auto& e : fk.entries()) ASSERT_EQ(e.exponent, 1u);
    ASSERT_EQ(kernel_omega(f), must_factor(s.kernel).omega());
  }
}

TEST(EulerForm, KnownValues) {
  const auto a = euler_form_check(must_factor(1025));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->prime, 41);
  EXPECT_EQ(a->root, 5);
  const auto b = euler_form_check(must_factor(45));
  ASSERT_TRUE(b);
  EXPECT_EQ(b->prime, 5);
  EXPECT_EQ(b->root, 3);
  EXPECT_FALSE(euler_form_check(must_factor(32769)));
  EXPECT_FALSE(euler_form_check(must_factor(36)));
}

TEST(ExactOnce, KnownValues) {
  EXPECT_TRUE(exact_once(2, 27, 19));
  EXPECT_FALSE(exact_once(2, 27, 3));
  EXPECT_FALSE(exact_once(2, 10, 5));
  EXPECT_EQ(power_plus_one_residue(2, 27, 361), 95);
  EXPECT_THROW(exact_once(2, 27, 2), std::invalid_argument);
  EXPECT_THROW(exact_once(3, 27, 3), std::invalid_argument);
}

TEST(ExactOnce, HugeExponentsNeverMaterialize) {
  // 2 * 5^40 has 94 bits; a^n+1 itself would have ~10^28 bits.
  const Natural n = 2 * power(Natural(5), 40);
  EXPECT_TRUE(exact_once(2, n, 41));
  EXPECT_TRUE(exact_once(2, n, 101));
  EXPECT_TRUE(exact_once(2, 27 * power(Natural(19), 30), 571));
}

TEST(ExactOnce, AgreesWithMaterializedValuation) {
  for (unsigned long a : {2ul, 3ul, 5ul, 6ul, 10ul}) {
    for (unsigned long n = 1; n <= 64; ++n) {
      const mpz_class N = oracle::power_plus_one(a, n);
      for (unsigned long p = 3; p < 400; p += 2) {
        if (!oracle::is_prime(p) || a % p == 0) continue;
        ASSERT_EQ(exact_once(a, n, p), oracle::valuation(N, p) == 1) << a << "^" << n << "+1, p=" << p;
      }
    }
  }
}

TEST(PerfectSquare, KnownValues) {
  EXPECT_TRUE(is_perfect_square(0));
  EXPECT_FALSE(is_perfect_square(32769));
  EXPECT_TRUE(is_perfect_square(65536));
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(is_perfect_square(natural_from_u64(n)), oracle::is_square(n));
}

TEST(Ljunggren, KnownValues) {
  EXPECT_FALSE(ljunggren_quotient_square(2, 3));
  EXPECT_FALSE(ljunggren_quotient_square(3, 5));
  EXPECT_EQ(exact_quotient(power_plus_one(3, 5), 4), 61);
  EXPECT_THROW(ljunggren_quotient_square(2, 4), std::invalid_argument);
  EXPECT_THROW(ljunggren_quotient_square(1, 3), std::invalid_argument);
}

TEST(Ljunggren, NoSquaresAtDeskScale) {
  for (unsigned long a = 2; a <= 50; ++a) {
    for (unsigned long f = 3; f <= 15; f += 2) ASSERT_FALSE(ljunggren_quotient_square(a, f)) << a << "," << f;
  }
}
