#pragma once

// Budgeted factorization: trial division by a sieved prime table, then
// Brent's variant of Pollard rho with fixed polynomial constants so every
// run is reproducible. Budget exhaustion yields a partial factorization plus
// the unfactored cofactor instead of an error.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apnkit/modular.hpp"
#include "apnkit/natural.hpp"
#include "apnkit/primality.hpp"
#include "apnkit/verdict.hpp"

namespace apnkit {

struct PrimePower {
  Natural prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower& x, const PrimePower& y) {
    return x.prime == y.prime && x.exponent == y.exponent;
  }
};

class Factorization {
 public:
  // The empty factorization of 1.
  Factorization() : value_(1) {}

  // Validates: strictly increasing primes, positive exponents.
  static Factorization from_entries(std::vector<PrimePower> entries) {
    Factorization f;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      if (e.exponent == 0) throw std::invalid_argument("zero exponent in factorization");
      if (i > 0 && !(entries[i - 1].prime < e.prime)) {
        throw std::invalid_argument("factorization primes must be strictly increasing");
      }
      const auto pr = test_primality(e.prime);
      if (!pr.prime) {
        throw std::invalid_argument("factorization entry is not prime: " + to_decimal(e.prime));
      }
      f.probabilistic_ = f.probabilistic_ || pr.probabilistic;
      f.value_ *= power(e.prime, e.exponent);
    }
    f.entries_ = std::move(entries);
    return f;
  }

  const std::vector<PrimePower>& entries() const { return entries_; }
  const Natural& value() const { return value_; }
  std::size_t omega() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool probabilistic() const { return probabilistic_; }

  unsigned exponent_of(const Natural& p) const {
    for (const auto& e : entries_) {
      if (e.prime == p) return e.exponent;
    }
    return 0;
  }

  // Factorization of value() * other.value().
  Factorization times(const Factorization& other) const {
    std::map<Natural, unsigned> merged;
    for (const auto& e : entries_) merged[e.prime] += e.exponent;
    for (const auto& e : other.entries_) merged[e.prime] += e.exponent;
    Factorization f;
    f.probabilistic_ = probabilistic_ || other.probabilistic_;
    f.value_ = value_ * other.value_;
    for (auto& [p, k] : merged) f.entries_.push_back({p, k});
    return f;
  }

  friend bool operator==(const Factorization& x, const Factorization& y) {
    return x.value_ == y.value_ && x.entries_ == y.entries_;
  }

 private:
  friend struct FactorAccumulator;

  std::vector<PrimePower> entries_;
  Natural value_;
  bool probabilistic_ = false;
};

struct FactorResult {
  Factorization found;   // primes fully divided out of n
  Natural cofactor = 1;  // unfactored remainder, coprime to every found prime
  std::uint64_t ops_used = 0;
  std::string reason;  // why the cofactor is left over, empty when complete

  bool complete() const { return cofactor == 1; }
};

namespace detail {

inline std::vector<std::uint32_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

inline constexpr std::uint64_t kSharedTableLimit = 1'000'000;

// Built once, read-only afterwards.
inline const std::vector<std::uint32_t>& shared_prime_table() {
  static const std::vector<std::uint32_t> table = sieve_primes(kSharedTableLimit);
  return table;
}

inline constexpr std::uint64_t kBrentBatch = 128;
inline constexpr int kMaxRhoSeeds = 24;

// Brent cycle finding on x -> x^2 + c mod n, n odd composite < 2^63.
// Returns a nontrivial divisor or 0. Each step costs two multiplications.
inline u64 brent_u64(u64 n, u64 c, u64 step_limit, std::uint64_t& ops) {
  const Montgomery mont(n);
  const u64 cm = mont.to(c);
  auto f = [&](u64 v) { return mont.add(mont.mul(v, v), cm); };
  auto absdiff = [](u64 a, u64 b) { return a > b ? a - b : b - a; };

  u64 y = mont.to(2);
  u64 x = y;
  u64 ys = y;
  u64 q = mont.to(1);
  u64 g = 1;
  u64 steps = 0;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    steps += r;
    for (u64 k = 0; k < r && g == 1 && steps < step_limit; k += kBrentBatch) {
      ys = y;
      const u64 lim = std::min(kBrentBatch, r - k);
      for (u64 i = 0; i < lim; ++i) {
        y = f(y);
        q = mont.mul(q, absdiff(x, y));
      }
      steps += lim;
      g = std::gcd(mont.from(q), n);
    }
    if (steps > step_limit) break;
  }
  ops += 2 * steps;
  if (g == n) {
    // Batch overshot; replay one step at a time from the saved point.
    g = 1;
    for (u64 i = 0; i < 4 * kBrentBatch && g == 1; ++i) {
      ys = f(ys);
      g = std::gcd(absdiff(x, ys), n);
      ++ops;
    }
  }
  return (g != 1 && g != n) ? g : 0;
}

inline Natural brent_mpz(const Natural& n, unsigned long c, std::uint64_t step_limit,
                         std::uint64_t& ops) {
  Natural y = 2, x = 2, ys = 2, q = 1, g = 1, diff;
  auto f = [&](Natural& v) {
    v *= v;
    v += c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  std::uint64_t steps = 0;
  for (std::uint64_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    steps += r;
    for (std::uint64_t k = 0; k < r && g == 1 && steps < step_limit; k += kBrentBatch) {
      ys = y;
      const std::uint64_t lim = std::min(kBrentBatch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        f(y);
        diff = x - y;
        q *= diff;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      steps += lim;
      g = gcd(q, n);
    }
    if (steps > step_limit) break;
  }
  ops += 2 * steps;
  if (g == n) {
    g = 1;
    for (std::uint64_t i = 0; i < 4 * kBrentBatch && g == 1; ++i) {
      f(ys);
      diff = x - ys;
      g = gcd(diff, n);
      ++ops;
    }
  }
  if (g != 1 && g != n) return g;
  return 0;
}

}  // namespace detail

struct FactorAccumulator {
  std::map<Natural, unsigned> primes;
  bool probabilistic = false;

  Factorization build() const {
    Factorization f;
    for (const auto& [p, k] : primes) {
      f.entries_.push_back({p, k});
      f.value_ *= power(p, k);
    }
    f.probabilistic_ = probabilistic;
    return f;
  }
};

inline FactorResult factor(const Natural& n, const FactorBudget& budget = {}) {
  if (sgn(n) <= 0) throw std::invalid_argument("factor: n must be >= 1");
  budget.validate();

  FactorAccumulator acc;
  FactorResult result;
  Natural rest = n;

  // Trial division.
  const auto& shared = detail::shared_prime_table();
  std::vector<std::uint32_t> local;
  if (budget.trial_limit > detail::kSharedTableLimit) {
    local = detail::sieve_primes(budget.trial_limit);
  }
  const auto& table = local.empty() ? shared : local;
  for (std::uint32_t p : table) {
    if (p > budget.trial_limit) break;
    if (auto small = to_u64(rest)) {
      if (*small == 1) break;
      if (static_cast<std::uint64_t>(p) * p > *small) {
        acc.primes[natural_from_u64(*small)] += 1;
        rest = 1;
        break;
      }
      if (*small % p != 0) continue;
    } else if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      continue;
    }
    unsigned k = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++k;
    }
    acc.primes[Natural(static_cast<unsigned long>(p))] += k;
  }

  // Pieces still to split, each with a multiplicity.
  std::vector<std::pair<Natural, unsigned>> pending;
  std::vector<std::pair<Natural, unsigned>> stuck;
  if (rest > 1) pending.emplace_back(rest, 1u);

  auto record_prime = [&](const Natural& q, unsigned mult) {
    acc.primes[q] += mult;
    for (auto* list : {&pending, &stuck}) {
      for (auto& [v, m] : *list) {
        const unsigned k = valuation(v, q);
        if (k == 0) continue;
        v = exact_quotient(v, power(q, k));
        acc.primes[q] += k * m;
      }
    }
  };

  std::uint64_t ops = 0;
  for (;;) {
  while (!pending.empty()) {
    auto [x, mult] = pending.back();
    pending.pop_back();
    if (x == 1) continue;

    const auto pr = test_primality(x);
    if (pr.prime) {
      acc.probabilistic = acc.probabilistic || pr.probabilistic;
      record_prime(x, mult);
      continue;
    }

    if (mpz_perfect_power_p(x.get_mpz_t())) {
      const std::size_t bits = bit_length(x);
      bool split = false;
      for (unsigned long k = 2; k <= bits && !split; ++k) {
        Natural root;
        if (mpz_root(root.get_mpz_t(), x.get_mpz_t(), k) != 0) {
          pending.emplace_back(root, mult * static_cast<unsigned>(k));
          split = true;
        }
      }
      if (split) continue;
    }

    Natural divisor = 0;
    for (int seed = 0; seed < detail::kMaxRhoSeeds && divisor == 0; ++seed) {
      if (ops >= budget.overall_op_cap) break;
      const std::uint64_t remaining = (budget.overall_op_cap - ops) / 2;
      const std::uint64_t limit = std::min(budget.rho_iterations, remaining);
      const unsigned long c = 1 + static_cast<unsigned long>(seed);
      const auto small = to_u64(x);
      if (small && *small < (1ULL << 63)) {
        const detail::u64 d = detail::brent_u64(*small, c, limit, ops);
        if (d != 0) divisor = natural_from_u64(d);
      } else {
        divisor = detail::brent_mpz(x, c, limit, ops);
      }
    }
    if (divisor == 0) {
      stuck.emplace_back(x, mult);
      continue;
    }
    pending.emplace_back(divisor, mult);
    pending.emplace_back(exact_quotient(x, divisor), mult);
  }

  // Leftovers may have shrunk to primes or units once later primes were
  // divided out, and two leftovers may share a factor.
  std::vector<std::pair<Natural, unsigned>> still;
  for (auto& piece : stuck) {
    if (piece.first == 1) continue;
    if (is_prime(piece.first)) {
      pending.push_back(piece);
    } else {
      still.push_back(piece);
    }
  }
  for (std::size_t i = 0; i < still.size() && pending.empty(); ++i) {
    for (std::size_t j = i + 1; j < still.size(); ++j) {
      const Natural g = gcd(still[i].first, still[j].first);
      if (g == 1) continue;
      for (auto idx : {i, j}) {
        pending.emplace_back(g, still[idx].second);
        pending.emplace_back(exact_quotient(still[idx].first, g), still[idx].second);
      }
      still.erase(still.begin() + static_cast<std::ptrdiff_t>(j));
      still.erase(still.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  stuck = std::move(still);
  if (pending.empty()) break;
  }

  result.found = acc.build();
  result.ops_used = ops;
  for (const auto& [v, m] : stuck) {
    if (v != 1) result.cofactor *= power(v, m);
  }
  if (!result.complete()) {
    result.reason = "factor budget exhausted with a " +
                    std::to_string(bit_length(result.cofactor)) +
                    "-bit composite cofactor (" + std::to_string(ops) + " ops used)";
  }
  return result;
}

// Memoizes factor() results for one fixed budget. Safe to share between
// threads; results are identical to uncached calls.
class FactorCache {
 public:
  explicit FactorCache(FactorBudget budget = {}) : budget_(budget) { budget_.validate(); }

  const FactorBudget& budget() const { return budget_; }

  FactorResult get(const Natural& n) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    }
    FactorResult r = factor(n, budget_);
    std::lock_guard lock(mutex_);
    return memo_.emplace(n, std::move(r)).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
  }

 private:
  FactorBudget budget_;
  mutable std::mutex mutex_;
  std::map<Natural, FactorResult> memo_;
};

}  // namespace apnkit
