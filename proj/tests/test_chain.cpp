#include <gtest/gtest.h>

#include "apnkit/chain.hpp"
#include "oracles.hpp"

using namespace apnkit;

namespace {

ExpForm form_of(unsigned long a, std::uint64_t n) {
  auto f = decompose_exponent(Natural(a), n);
  return std::get<ExpForm>(f);
}

FactorChain chain_of(unsigned long a, std::uint64_t n) { return build_chain(form_of(a, n)); }

}  // namespace

TEST(DecomposeExponent, KnownValues) {
  const auto f27 = form_of(2, 27);
  EXPECT_EQ(f27.U, 0u);
  EXPECT_EQ(f27.odd_part, (std::vector<OddPrimePower>{{3, 3}}));
  const auto f16 = form_of(2, 16);
  EXPECT_EQ(f16.U, 4u);
  EXPECT_TRUE(f16.odd_part.empty());
  const auto f10 = form_of(2, 10);
  EXPECT_EQ(f10.U, 1u);
  EXPECT_EQ(f10.odd_part, (std::vector<OddPrimePower>{{5, 1}}));
}

TEST(DecomposeExponent, DescendingPrimesAndProduct) {
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    const auto f = form_of(3, n);
    std::uint64_t prod = std::uint64_t{1} << f.U;
    for (std::size_t i = 0; i < f.odd_part.size(); ++i) {
      prod *= f.odd_part[i].value();
      ASSERT_EQ(f.odd_part[i].prime % 2, 1u);
      if (i > 0) ASSERT_GT(f.odd_part[i - 1].prime, f.odd_part[i].prime);
    }
    ASSERT_EQ(prod, n);
    ASSERT_EQ(f.level_exponent(f.r()), n);
  }
  EXPECT_THROW(decompose_exponent(Natural(1), 5), std::invalid_argument);
  EXPECT_THROW(decompose_exponent(Natural(2), 0), std::invalid_argument);
}

TEST(BuildChain, TwoToFifteen) {
  const auto c = chain_of(2, 15);
  ASSERT_EQ(c.levels.size(), 3u);
  EXPECT_EQ(c.levels[0].M, 3);
  EXPECT_EQ(c.levels[1].M, 11);
  EXPECT_EQ(c.levels[2].M, 993);
  EXPECT_EQ(c.levels[2].L, 32769);
  EXPECT_EQ(c.levels[2].split_L->kernel, 3641);
  EXPECT_EQ(c.levels[1].split_L->kernel, 33);
  EXPECT_EQ(c.levels[1].split_L->kernel, c.levels[0].split_L->kernel * c.levels[1].split_M->kernel);
  EXPECT_EQ(c.s, 1u);
  EXPECT_TRUE(c.complete);
}

TEST(BuildChain, TwoToTenAndSixteen) {
  const auto c10 = chain_of(2, 10);
  ASSERT_EQ(c10.levels.size(), 2u);
  EXPECT_EQ(c10.levels[0].M, 5);
  EXPECT_EQ(c10.levels[1].M, 205);
  EXPECT_EQ(c10.levels[1].split_L->kernel, 41);

  const auto c16 = chain_of(2, 16);
  ASSERT_EQ(c16.levels.size(), 1u);
  EXPECT_EQ(c16.levels[0].L, 65537);
  EXPECT_EQ(c16.levels[0].split_L->kernel, 65537);
  EXPECT_TRUE(is_prime(c16.levels[0].L));
}

TEST(BuildChain, RefusesAboveBitCap) {
  ChainOptions opts;
  opts.bit_cap = 100;
  EXPECT_THROW(build_chain(form_of(2, 105), {}, opts), ChainTooLarge);
  EXPECT_NO_THROW(build_chain(form_of(2, 99), {}, opts));
}

TEST(BuildChain, UnclassifiedLevelsStillReturnChain) {
  FactorBudget tiny;
  tiny.trial_limit = 10;
  tiny.rho_iterations = 2;
  tiny.overall_op_cap = 2;
  const auto c = build_chain(form_of(2, 165), tiny);
  EXPECT_FALSE(c.complete);
  EXPECT_FALSE(c.inconclusive_reason.empty());
  Natural prod = 1;
  for (const auto& lvl : c.levels) prod *= lvl.M;
  EXPECT_EQ(prod, oracle::power_plus_one(2, 165));
}

TEST(VerifyCongruence, KnownValues) {
  const auto c15 = chain_of(2, 15);
  EXPECT_TRUE(verify_congruence(c15, 2));
  EXPECT_EQ(c15.levels[2].M % c15.levels[1].L, 3);
  EXPECT_TRUE(verify_congruence(c15, 1));
  EXPECT_EQ(c15.levels[1].M % c15.levels[0].L, 2);
  const auto c10 = chain_of(2, 10);
  EXPECT_TRUE(verify_congruence(c10, 1));
  EXPECT_EQ(c10.levels[1].M % 5, 0);
  EXPECT_THROW(verify_congruence(c10, 0), std::out_of_range);
  EXPECT_THROW(verify_congruence(c10, 2), std::out_of_range);
}

TEST(ClassifySteps, KnownValues) {
  const auto c15 = chain_of(2, 15);
  const auto s15 = classify_steps(c15);
  ASSERT_EQ(s15.size(), 2u);
  EXPECT_EQ(s15[0].step.kind, StepKind::kCoprime);
  EXPECT_EQ(s15[1].step.kind, StepKind::kSharedPrime);
  EXPECT_EQ(s15[1].step.prime, 3);
  EXPECT_TRUE(s15[0].ok());
  EXPECT_TRUE(s15[1].ok());

  const auto s10 = classify_steps(chain_of(2, 10));
  ASSERT_EQ(s10.size(), 1u);
  EXPECT_EQ(s10[0].step.kind, StepKind::kSharedPrime);
  EXPECT_EQ(s10[0].step.prime, 5);
  EXPECT_TRUE(s10[0].ok());

  EXPECT_TRUE(classify_steps(chain_of(2, 16)).empty());
}

TEST(ClassifySteps, SurfacesTamperedLevels) {
  auto c = chain_of(2, 15);
  c.levels[2].step.prime = 5;
  const auto steps = classify_steps(c);
  EXPECT_FALSE(steps[1].ok());
}

TEST(VerifyOrderConditions, KnownValues) {
  EXPECT_TRUE(std::get<bool>(verify_order_conditions(form_of(2, 10), 5, 1)));
  EXPECT_TRUE(std::get<bool>(verify_order_conditions(form_of(2, 15), 3, 2)));
  EXPECT_TRUE(std::get<bool>(verify_order_conditions(form_of(2, 27), 3, 1)));
  // P_2 = 3 for n = 15, so the precondition is p | 2^5 + 1 = 33.
  EXPECT_TRUE(std::get<bool>(verify_order_conditions(form_of(2, 15), 11, 2)));
  EXPECT_THROW(verify_order_conditions(form_of(2, 15), 7, 2), std::invalid_argument);
}

TEST(KernelGrowth, KnownValues) {
  const auto w15 = kernel_omegas(chain_of(2, 15));
  EXPECT_EQ(w15, (std::vector<std::optional<std::size_t>>{1, 2, 2}));
  EXPECT_TRUE(kernel_growth_check(chain_of(2, 15)));
  const auto w10 = kernel_omegas(chain_of(2, 10));
  EXPECT_EQ(w10, (std::vector<std::optional<std::size_t>>{1, 1}));
  EXPECT_TRUE(kernel_growth_check(chain_of(2, 10)));
  EXPECT_TRUE(kernel_growth_check(chain_of(2, 16)));
}

TEST(RBound, KnownValues) {
  const auto c15 = chain_of(2, 15);
  EXPECT_EQ(c15.r(), 2u);
  EXPECT_TRUE(r_bound_check(c15));

  // a = 2, U = 0: s = omega(3) = 1 so r <= 2; three odd primes break it.
  const auto c105 = chain_of(2, 105);
  EXPECT_EQ(c105.s, 1u);
  EXPECT_EQ(c105.r(), 3u);
  EXPECT_FALSE(r_bound_check(c105));

  // a = 3, U = 0, a + 1 = 4 square: r <= 2s + 1 = 3.
  const auto c3 = chain_of(3, 105);
  EXPECT_EQ(c3.s, 1u);
  EXPECT_TRUE(r_bound_check(c3));

  FactorChain unknown;
  EXPECT_THROW(r_bound_check(unknown), std::logic_error);
}

// Chain structure on a desk-scale corpus (the acceptance suite goes to n = 200).
TEST(ChainProperties, SmallCorpus) {
  FactorBudget budget;
  budget.rho_iterations = 50000;
  budget.overall_op_cap = 200000;
  FactorCache cache(budget);
  for (unsigned long a : {2ul, 3ul, 5ul, 6ul, 10ul}) {
    for (std::uint64_t n = 1; n <= 60; ++n) {
      const auto form = form_of(a, n);
      if (form.r() == 0) continue;
      ChainOptions opts;
      opts.cache = &cache;
      const auto c = build_chain(form, cache.budget(), opts);
      Natural prod = 1;
      for (const auto& lvl : c.levels) prod *= lvl.M;
      ASSERT_EQ(prod, oracle::power_plus_one(a, n));
      ASSERT_EQ(c.levels.back().L, prod);
      for (std::size_t i = 1; i <= c.r(); ++i) ASSERT_TRUE(verify_congruence(c, i)) << a << "^" << n;
      for (const auto& s : classify_steps(c)) {
        ASSERT_TRUE(s.ok()) << a << "^" << n << ": " << s.violations.front();
        if (s.step.kind == StepKind::kSharedPrime) {
          ASSERT_TRUE(std::get<bool>(verify_order_conditions(form, s.step.prime, s.index)));
        }
      }
      ASSERT_TRUE(kernel_growth_check(c)) << a << "^" << n;
      // r_bound is necessary for a^n+1 = p x^2, so whenever it fails the
      // kernel of a^n+1 has at least two primes.
      if (c.complete && c.s && !r_bound_check(c) && kernel_omegas(c).back()) {
        ASSERT_GE(*kernel_omegas(c).back(), 2u) << a << "^" << n;
      }
    }
  }
}

TEST(ChainProperties, ParallelBuildMatchesSerial) {
  ChainOptions par;
  par.jobs = 4;
  const auto f = form_of(2, 105);
  const auto a = build_chain(f);
  const auto b = build_chain(f, {}, par);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    EXPECT_EQ(a.levels[i].M, b.levels[i].M);
    EXPECT_EQ(a.levels[i].M_factors, b.levels[i].M_factors);
  }
}
