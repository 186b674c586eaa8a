#pragma once

// Exhaustive desk-scale scans of a^n + 1 and n^n + 1, the n^n + 1 coprime
// split, and a census of primes of a given order against the k0 cap.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apnkit/bounds.hpp"
#include "apnkit/factor.hpp"
#include "apnkit/natural.hpp"
#include "apnkit/ntcore.hpp"
#include "apnkit/parallel.hpp"
#include "apnkit/verdict.hpp"

namespace apnkit::search {

inline constexpr std::size_t kDefaultScanBitCap = 64;

struct ScanFinding {
  Natural a;
  Natural n;
  Natural N;
  Natural m;  // sigma(N) = m N
  Factorization factors;

  bool even() const { return mpz_even_p(N.get_mpz_t()) != 0; }
};

enum class CellStatus { kFinding, kRefuted, kInconclusive, kSkipped };

inline const char* cell_status_name(CellStatus s) {
  switch (s) {
    case CellStatus::kFinding: return "finding";
    case CellStatus::kRefuted: return "refuted";
    case CellStatus::kInconclusive: return "inconclusive";
    case CellStatus::kSkipped: return "skipped";
  }
  return "?";
}

// A cell that is not a finding, with why.
struct CellNote {
  Natural a;
  Natural n;
  std::string reason;
};

struct ScanReport {
  std::string family;  // "a^n+1" or "n^n+1"
  Natural a_min, a_max, n_min, n_max;
  std::size_t bit_cap = kDefaultScanBitCap;
  FactorBudget budget;
  std::vector<ScanFinding> findings;
  std::vector<CellNote> refuted;
  std::vector<CellNote> inconclusive;
  std::vector<CellNote> skipped;  // over the bit cap, not scanned

  std::size_t scanned() const { return findings.size() + refuted.size() + inconclusive.size(); }
};

struct CellOutcome {
  CellStatus status = CellStatus::kSkipped;
  std::optional<ScanFinding> finding;
  std::string reason;
};

// Exact-once primes among the fully split part of a partial factorization.
inline std::vector<Natural> exact_once_primes(const FactorResult& fr, const Natural& N) {
  std::vector<Natural> out;
  for (const auto& e : fr.found.entries()) {
    if (e.exponent != 1 || e.prime == 2) continue;
    const Natural p2 = e.prime * e.prime;
    if (!divides(p2, N)) out.push_back(e.prime);
  }
  return out;
}

inline CellOutcome classify_value(const Natural& a, const Natural& n, const Natural& N,
                                  const FactorBudget& budget) {
  CellOutcome out;
  const FactorResult fr = factor(N, budget);
  if (fr.complete()) {
    if (auto m = multiperfect_class(fr.found)) {
      out.status = CellStatus::kFinding;
      out.finding = ScanFinding{a, n, N, *m, fr.found};
      return out;
    }
    out.status = CellStatus::kRefuted;
    out.reason = "sigma(N)/N = " + to_string(sigma_ratio(fr.found)) + " is not an integer";
    return out;
  }
  // Without a full factorization only the odd case can be refuted, and only
  // through two primes dividing N exactly once (N is then not p x^2).
  if (mpz_odd_p(N.get_mpz_t())) {
    const auto once = exact_once_primes(fr, N);
    if (once.size() >= 2) {
      out.status = CellStatus::kRefuted;
      out.reason = "not of the form p x^2: " + to_decimal(once[0]) + " and " + to_decimal(once[1]) +
                   " divide N exactly once";
      return out;
    }
  }
  out.status = CellStatus::kInconclusive;
  out.reason = fr.reason.empty() ? "factorization incomplete" : fr.reason;
  return out;
}

namespace detail {

struct Cell {
  Natural a;
  Natural n;
};

inline void merge(ScanReport& report, const std::vector<Cell>& cells, const std::vector<CellOutcome>& outs) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& o = outs[i];
    switch (o.status) {
      case CellStatus::kFinding: report.findings.push_back(*o.finding); break;
      case CellStatus::kRefuted: report.refuted.push_back({cells[i].a, cells[i].n, o.reason}); break;
      case CellStatus::kInconclusive:
        report.inconclusive.push_back({cells[i].a, cells[i].n, o.reason});
        break;
      case CellStatus::kSkipped: report.skipped.push_back({cells[i].a, cells[i].n, o.reason}); break;
    }
  }
}

inline CellOutcome scan_cell(const Natural& base, unsigned long exponent, std::size_t bit_cap,
                             const FactorBudget& budget, const Natural& a, const Natural& n) {
  if (log2_power(base, exponent) > static_cast<double>(bit_cap) + 1) {
    return {CellStatus::kSkipped, std::nullopt, "over bit cap"};
  }
  const Natural N = power_plus_one(base, exponent);
  if (bit_length(N) > bit_cap) return {CellStatus::kSkipped, std::nullopt, "over bit cap"};
  return classify_value(a, n, N, budget);
}

}  // namespace detail

// a ascending, then n ascending. Each cell gets its own budget.
inline ScanReport scan_power_plus_one(std::uint64_t a_min, std::uint64_t a_max, std::uint64_t n_min,
                                      std::uint64_t n_max, std::size_t bit_cap = kDefaultScanBitCap,
                                      const FactorBudget& budget = {}, unsigned jobs = 1) {
  if (a_min < 1 || a_max < a_min || n_min < 1 || n_max < n_min) {
    throw std::invalid_argument("scan_power_plus_one: empty or invalid range");
  }
  budget.validate();
  ScanReport report;
  report.family = "a^n+1";
  report.a_min = natural_from_u64(a_min);
  report.a_max = natural_from_u64(a_max);
  report.n_min = natural_from_u64(n_min);
  report.n_max = natural_from_u64(n_max);
  report.bit_cap = bit_cap;
  report.budget = budget;

  std::vector<detail::Cell> cells;
  for (std::uint64_t a = a_min; a <= a_max; ++a) {
    for (std::uint64_t n = n_min; n <= n_max; ++n) {
      cells.push_back({natural_from_u64(a), natural_from_u64(n)});
    }
  }
  const auto outs = ordered_parallel_map(cells.size(), jobs, [&](std::size_t i) {
    return detail::scan_cell(cells[i].a, cells[i].n.get_ui(), bit_cap, budget, cells[i].a, cells[i].n);
  });
  detail::merge(report, cells, outs);
  return report;
}

inline ScanReport scan_self_power(std::uint64_t n_max, std::size_t bit_cap = kDefaultScanBitCap,
                                  const FactorBudget& budget = {}, unsigned jobs = 1) {
  if (n_max < 1) throw std::invalid_argument("scan_self_power: n_max must be >= 1");
  budget.validate();
  ScanReport report;
  report.family = "n^n+1";
  report.a_min = 1;
  report.a_max = natural_from_u64(n_max);
  report.n_min = 1;
  report.n_max = natural_from_u64(n_max);
  report.bit_cap = bit_cap;
  report.budget = budget;

  std::vector<detail::Cell> cells;
  for (std::uint64_t n = 1; n <= n_max; ++n) cells.push_back({natural_from_u64(n), natural_from_u64(n)});
  const auto outs = ordered_parallel_map(cells.size(), jobs, [&](std::size_t i) {
    return detail::scan_cell(cells[i].n, cells[i].n.get_ui(), bit_cap, budget, cells[i].a, cells[i].n);
  });
  detail::merge(report, cells, outs);
  return report;
}

inline constexpr std::size_t kDefaultReductionBitCap = 4096;

struct NnReduction {
  std::uint64_t n = 0;
  unsigned u = 0;
  std::uint64_t s = 0;
  Natural N1;  // n^(2^u) + 1
  Natural N2;  // (n^n + 1) / N1
  Natural gcd;
  bool coprime = false;
  bool N1_square = false;
  std::optional<SquarefreeSplit> split_N1;
  std::optional<SquarefreeSplit> split_N2;
  std::string note;

  bool ok() const { return coprime && !N1_square; }
};

// n = 2^u s with s > 1 odd: n^n + 1 = N1 * N2 with gcd(N1, N2) = 1.
inline OrInconclusive<NnReduction> nn_reduction(std::uint64_t n, const FactorBudget& budget = {},
                                                std::size_t bit_cap = kDefaultReductionBitCap) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("nn_reduction: n must be even");
  NnReduction r;
  r.n = n;
  r.s = n;
  while (r.s % 2 == 0) {
    r.s /= 2;
    ++r.u;
  }
  if (r.s == 1) throw std::invalid_argument("nn_reduction: n must have an odd part > 1");
  const Natural base = natural_from_u64(n);
  if (log2_power(base, n) > static_cast<double>(bit_cap)) {
    return Inconclusive{"n^n+1 exceeds the bit cap of " + std::to_string(bit_cap)};
  }
  r.N1 = power_plus_one(base, std::uint64_t{1} << r.u);
  r.N2 = exact_quotient(power_plus_one(base, n), r.N1);
  r.gcd = apnkit::gcd(r.N1, r.N2);
  r.coprime = r.gcd == 1;
  r.N1_square = is_perfect_square(r.N1);

  const FactorResult f1 = factor(r.N1, budget);
  if (f1.complete()) r.split_N1 = squarefree_split(f1.found);
  const FactorResult f2 = factor(r.N2, budget);
  if (f2.complete()) r.split_N2 = squarefree_split(f2.found);
  if (!f1.complete() || !f2.complete()) r.note = "kernel unavailable: factoring budget exhausted";
  return r;
}

struct CensusRow {
  std::uint64_t d = 0;
  std::vector<Natural> primes;  // o_p(a) = 2^(U+1) d
  std::int64_t k0 = 0;
  bool ok = false;
  std::optional<std::string> inconclusive;
};

// Primes of order exactly 2^(U+1) d all divide a^(2^U d) + 1.
inline std::vector<CensusRow> primitive_prime_census(const Natural& a, unsigned U, std::uint64_t d_max,
                                                     const FactorBudget& budget = {}, unsigned jobs = 1) {
  if (a < 2) throw std::invalid_argument("primitive_prime_census: a must be >= 2");
  if (U > 20) throw std::invalid_argument("primitive_prime_census: U too large");
  std::vector<std::uint64_t> ds;
  for (std::uint64_t d = 1; d <= d_max; d += 2) ds.push_back(d);
  const double log_a = natural_log(a);

  return ordered_parallel_map(ds.size(), jobs, [&](std::size_t idx) {
    CensusRow row;
    row.d = ds[idx];
    row.k0 = bounds::k0(log_a, U, row.d);
    const std::uint64_t half = (std::uint64_t{1} << U) * row.d;
    const Natural target = natural_from_u64(2 * half);
    const FactorResult fr = factor(power_plus_one(a, half), budget);
    if (!fr.complete()) {
      row.inconclusive = "cannot factor a^(2^U d)+1: " + fr.reason;
      return row;
    }
    for (const auto& e : fr.found.entries()) {
      if (e.prime == 2 || divides(e.prime, a)) continue;
      const auto ord = multiplicative_order(a, e.prime, budget);
      if (const Natural* k = value_if(ord)) {
        if (*k == target) row.primes.push_back(e.prime);
      } else {
        row.inconclusive = std::get<Inconclusive>(ord).reason;
        return row;
      }
    }
    row.ok = static_cast<std::int64_t>(row.primes.size()) <= row.k0;
    return row;
  });
}

}  // namespace apnkit::search
