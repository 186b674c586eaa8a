#pragma once

// Telescoping decomposition of a^n + 1.
//
// With n = 2^U * P_1 ... P_r (P_i = p_i^e_i, p_1 > ... > p_r odd primes) put
// N_0 = 2^U, N_i = N_{i-1} P_i and
//
//   L_i = a^{N_i} + 1,   M_0 = L_0,   M_i = L_i / L_{i-1},
//
// so a^n + 1 = M_0 M_1 ... M_r. E_i and D_i are the squarefree kernels of M_i
// and L_i. Each step i >= 1 is either coprime (gcd(L_{i-1}, M_i) = 1) or
// shares exactly the prime p_i, which then divides M_0.
//
// In a coprime step kernels multiply, so D_i = D_{i-1} * E_i (not
// D_{i-1} * E_{i-1}): for a = 2, n = 15, D_1 = 3 * 11 = D_0 * E_1.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apnkit/factor.hpp"
#include "apnkit/ntcore.hpp"
#include "apnkit/parallel.hpp"

namespace apnkit {

struct OddPrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  std::uint64_t value() const {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < exponent; ++i) v *= prime;
    return v;
  }
  friend bool operator==(const OddPrimePower&, const OddPrimePower&) = default;
};

struct ExpForm {
  Natural a;
  std::uint64_t n = 0;
  unsigned U = 0;
  std::vector<OddPrimePower> odd_part;  // strictly decreasing primes

  std::size_t r() const { return odd_part.size(); }

  // P_i for 1 <= i <= r.
  std::uint64_t P(std::size_t i) const { return odd_part.at(i - 1).value(); }

  // N_i = 2^U P_1 ... P_i, so N_0 = 2^U and N_r = n.
  std::uint64_t level_exponent(std::size_t i) const {
    std::uint64_t e = std::uint64_t{1} << U;
    for (std::size_t k = 1; k <= i; ++k) e *= P(k);
    return e;
  }
};

inline OrInconclusive<ExpForm> decompose_exponent(const Natural& a, std::uint64_t n,
                                                  const FactorBudget& budget = {}) {
  if (a < 2) throw std::invalid_argument("decompose_exponent: a must be >= 2");
  if (n == 0) throw std::invalid_argument("decompose_exponent: n must be >= 1");
  ExpForm form{a, n, 0, {}};
  std::uint64_t odd = n;
  while (odd % 2 == 0) {
    odd /= 2;
    ++form.U;
  }
  const FactorResult fr = factor(natural_from_u64(odd), budget);
  if (!fr.complete()) return Inconclusive{"cannot factor odd part of n: " + fr.reason};
  for (auto it = fr.found.entries().rbegin(); it != fr.found.entries().rend(); ++it) {
    form.odd_part.push_back({*to_u64(it->prime), it->exponent});
  }
  return form;
}

enum class StepKind { kBase, kCoprime, kSharedPrime, kUnclassified };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::kBase: return "base";
    case StepKind::kCoprime: return "coprime";
    case StepKind::kSharedPrime: return "shared-prime";
    case StepKind::kUnclassified: return "unclassified";
  }
  return "?";
}

struct StepClass {
  StepKind kind = StepKind::kBase;
  Natural prime = 0;   // the shared prime for kSharedPrime
  std::string reason;  // budget note for kUnclassified
};

struct ChainLevel {
  std::size_t index = 0;
  Natural M;
  Natural L;
  Natural shared_gcd = 1;  // gcd(L_{i-1}, M_i); 1 for the base level
  std::optional<Factorization> gcd_factors;
  std::optional<Factorization> M_factors;
  std::optional<Factorization> L_factors;
  std::optional<SquarefreeSplit> split_M;  // (E_i, Y_i)
  std::optional<SquarefreeSplit> split_L;  // (D_i, X_i)
  StepClass step;
  std::string factor_note;  // set when M_i stayed partially factored
};

struct FactorChain {
  ExpForm form;
  std::vector<ChainLevel> levels;
  std::optional<std::size_t> s;  // omega(M_0), known iff M_0 fully factored
  bool complete = false;         // every M_i fully factored
  std::string inconclusive_reason;

  std::size_t r() const { return form.r(); }
};

inline constexpr std::size_t kDefaultChainBitCap = std::size_t{1} << 16;

struct ChainOptions {
  std::size_t bit_cap = kDefaultChainBitCap;
  FactorCache* cache = nullptr;  // when set, its budget replaces the argument
  unsigned jobs = 1;
};

class ChainTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline FactorChain build_chain(const ExpForm& form, const FactorBudget& budget = {},
                               const ChainOptions& options = {}) {
  if (form.a < 2 || form.n == 0) throw std::invalid_argument("build_chain: invalid form");
  const double bits = log2_power(form.a, form.n);
  if (bits > static_cast<double>(options.bit_cap)) {
    throw ChainTooLarge("a^n+1 has about " + std::to_string(static_cast<long long>(bits)) +
                        " bits, above the chain cap of " + std::to_string(options.bit_cap));
  }

  FactorChain chain;
  chain.form = form;
  const std::size_t r = form.r();
  chain.levels.resize(r + 1);

  Natural prev_L = 0;
  for (std::size_t i = 0; i <= r; ++i) {
    auto& lvl = chain.levels[i];
    lvl.index = i;
    lvl.L = power_plus_one(form.a, form.level_exponent(i));
    if (i == 0) {
      lvl.M = lvl.L;
      lvl.step.kind = StepKind::kBase;
    } else {
      lvl.M = exact_quotient(lvl.L, prev_L);
      lvl.shared_gcd = gcd(prev_L, lvl.M);
    }
    prev_L = lvl.L;
  }

  auto run_factor = [&](const Natural& v) {
    return options.cache != nullptr ? options.cache->get(v) : factor(v, budget);
  };

  const auto m_results = ordered_parallel_map(
      r + 1, options.jobs, [&](std::size_t i) { return run_factor(chain.levels[i].M); });

  chain.complete = true;
  for (std::size_t i = 0; i <= r; ++i) {
    auto& lvl = chain.levels[i];
    const FactorResult& fr = m_results[i];
    if (fr.complete()) {
      lvl.M_factors = fr.found;
      lvl.split_M = squarefree_split(fr.found);
    } else {
      lvl.factor_note = fr.reason;
      chain.complete = false;
      if (chain.inconclusive_reason.empty()) {
        chain.inconclusive_reason = "M_" + std::to_string(i) + ": " + fr.reason;
      }
    }
    if (i == 0) {
      lvl.L_factors = lvl.M_factors;
    } else if (lvl.M_factors && chain.levels[i - 1].L_factors) {
      lvl.L_factors = chain.levels[i - 1].L_factors->times(*lvl.M_factors);
    }
    if (lvl.L_factors) lvl.split_L = squarefree_split(*lvl.L_factors);

    if (i == 0) continue;
    if (lvl.shared_gcd == 1) {
      lvl.step.kind = StepKind::kCoprime;
      continue;
    }
    // The gcd divides P_i, so this always succeeds in practice.
    const FactorResult gf = factor(lvl.shared_gcd, budget);
    if (!gf.complete()) {
      lvl.step = {StepKind::kUnclassified, 0, gf.reason};
      continue;
    }
    lvl.gcd_factors = gf.found;
    lvl.step.kind = StepKind::kSharedPrime;
    lvl.step.prime = gf.found.entries().front().prime;
  }
  if (chain.levels[0].M_factors) chain.s = chain.levels[0].M_factors->omega();
  if (!chain.s) chain.complete = false;
  return chain;
}

// M_i = P_i (mod L_{i-1}).
inline bool verify_congruence(const FactorChain& chain, std::size_t i) {
  if (i == 0 || i > chain.r()) throw std::out_of_range("verify_congruence: need 1 <= i <= r");
  const Natural& modulus = chain.levels[i - 1].L;
  const Natural lhs = chain.levels[i].M % modulus;
  const Natural rhs = natural_from_u64(chain.form.P(i)) % modulus;
  return lhs == rhs;
}

// 2^{U+1} | o_p(a) and o_p(a) | 2n/P_i, given p | a^{n/P_i} + 1.
inline OrInconclusive<bool> verify_order_conditions(const ExpForm& form, const Natural& p,
                                                    std::size_t i,
                                                    const FactorBudget& budget = {}) {
  if (i == 0 || i > form.r()) throw std::out_of_range("verify_order_conditions: need 1 <= i <= r");
  const std::uint64_t cofactor_exp = form.n / form.P(i);
  if (power_plus_one_residue(form.a, natural_from_u64(cofactor_exp), p) != 0) {
    throw std::invalid_argument("verify_order_conditions: p does not divide a^(n/P_i)+1");
  }
  const auto order = multiplicative_order(form.a, p, budget);
  const Natural* o = value_if(order);
  if (o == nullptr) return std::get<Inconclusive>(order);
  const Natural two_pow = power(Natural(2), form.U + 1);
  return divides(two_pow, *o) && divides(*o, natural_from_u64(2 * cofactor_exp));
}

struct StepReport {
  std::size_t index = 0;
  StepClass step;
  std::vector<std::string> violations;  // any entry is a bug or a counterexample
  std::vector<std::string> skipped;     // checks that needed unavailable factors

  bool ok() const { return violations.empty(); }
};

inline std::vector<StepReport> classify_steps(const FactorChain& chain,
                                              const FactorBudget& budget = {}) {
  std::vector<StepReport> out;
  const auto& form = chain.form;
  const auto& levels = chain.levels;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const auto& lvl = levels[i];
    const auto& prev = levels[i - 1];
    StepReport rep{i, lvl.step, {}, {}};
    const std::string where = "level " + std::to_string(i) + ": ";

    switch (lvl.step.kind) {
      case StepKind::kCoprime: {
        if (prev.split_L && lvl.split_L && lvl.split_M) {
          if (lvl.split_L->kernel != prev.split_L->kernel * lvl.split_M->kernel) {
            rep.violations.push_back(where + "D_i != D_{i-1} * E_i at a coprime step");
          }
          if (!(kernel_omega(*prev.L_factors) < kernel_omega(*lvl.L_factors))) {
            rep.violations.push_back(where + "omega(D) did not grow at a coprime step");
          }
        } else {
          rep.skipped.push_back(where + "kernel checks need full factorizations");
        }
        break;
      }
      case StepKind::kSharedPrime: {
        const auto& g = *lvl.gcd_factors;
        if (g.omega() != 1) {
          std::string primes;
          for (const auto& e : g.entries()) primes += " " + to_decimal(e.prime);
          rep.violations.push_back(where + "several primes divide gcd(L_{i-1}, M_i):" + primes);
        }
        const Natural p = lvl.step.prime;
        if (p != natural_from_u64(form.odd_part[i - 1].prime)) {
          rep.violations.push_back(where + "shared prime " + to_decimal(p) + " is not p_i");
        }
        if (!divides(p, levels[0].M)) {
          rep.violations.push_back(where + "shared prime does not divide M_0");
        }
        const auto order = multiplicative_order(form.a, p, budget);
        if (const Natural* o = value_if(order)) {
          if (*o != power(Natural(2), form.U + 1)) {
            rep.violations.push_back(where + "o_p(a) = " + to_decimal(*o) + " != 2^(U+1)");
          }
        } else {
          rep.skipped.push_back(where + std::get<Inconclusive>(order).reason);
        }
        break;
      }
      case StepKind::kUnclassified:
        rep.skipped.push_back(where + "unclassified: " + lvl.step.reason);
        break;
      case StepKind::kBase:
        rep.violations.push_back(where + "base step above level 0");
        break;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

// omega(D_i) per level; nullopt where L_i is not fully factored.
inline std::vector<std::optional<std::size_t>> kernel_omegas(const FactorChain& chain) {
  std::vector<std::optional<std::size_t>> out;
  for (const auto& lvl : chain.levels) {
    if (lvl.L_factors) {
      out.push_back(kernel_omega(*lvl.L_factors));
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

// omega(D_{i-1}) <= omega(D_i) + 1 everywhere, strictly increasing at coprime
// steps. Checks every adjacent pair whose kernels are known.
inline bool kernel_growth_check(const FactorChain& chain) {
  const auto w = kernel_omegas(chain);
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!w[i - 1] || !w[i]) continue;
    if (*w[i - 1] > *w[i] + 1) return false;
    if (chain.levels[i].step.kind == StepKind::kCoprime && !(*w[i - 1] < *w[i])) return false;
  }
  return true;
}

// r <= 2s (+1 when U = 0 and a + 1 is a square). Necessary for a^n + 1 = p x^2.
inline bool r_bound_check(const FactorChain& chain) {
  if (!chain.s) throw std::logic_error("r_bound_check: s = omega(M_0) unknown");
  const auto& f = chain.form;
  const bool square_base = f.U == 0 && is_perfect_square(f.a + 1);
  const std::size_t bound = 2 * *chain.s + (square_base ? 1 : 0);
  return chain.r() <= bound;
}

}  // namespace apnkit
