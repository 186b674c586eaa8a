#pragma once

// Analytic bounds on sigma(a^n+1)/(a^n+1) for odd (4m+2)-perfect candidates.
// All logarithms are natural logarithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace apnkit::bounds {

inline const double kLog2 = std::log(2.0);
inline const double kLog3 = std::log(3.0);

// Rounding slack for floor() of quantities that are exact integers in
// real arithmetic (e.g. 2 log 2 / log 4).
inline constexpr double kFloorSlack = 1e-9;

inline std::int64_t robust_floor(double x) {
  const double f = std::floor(x + kFloorSlack * std::max(1.0, std::fabs(x)));
  if (!(f < 9.2e18)) throw std::overflow_error("bound quantity does not fit in 64 bits");
  return static_cast<std::int64_t>(f);
}

// c = log2/2 + log3/3 - (log3)^2/2, the constant with
// sum_{k<=t} log k / k <= (log t)^2/2 + c for t >= 1 (equality at t = 3).
inline double constant_c() { return kLog2 / 2 + kLog3 / 3 - kLog3 * kLog3 / 2; }

enum class CVariant {
  kOddMultiplier,  // t odd
  kAllMultiplier,  // every t >= 1
};

inline const char* variant_name(CVariant v) {
  return v == CVariant::kOddMultiplier ? "odd" : "all";
}

// C(U) = sum of (1 - log log x)/x over x = 2^{U+1} t <= 15.
inline double constant_C(unsigned U, CVariant variant) {
  if (U >= 3) return 0.0;
  const std::uint64_t step = std::uint64_t{1} << (U + 1);
  double sum = 0.0;
  for (std::uint64_t t = 1; step * t <= 15; ++t) {
    if (variant == CVariant::kOddMultiplier && t % 2 == 0) continue;
    const double x = static_cast<double>(step * t);
    sum += (1.0 - std::log(std::log(x))) / x;
  }
  return sum;
}

// The variant that reproduces the tabulated constants: all multipliers at
// U = 0, odd multipliers above.
inline CVariant default_variant(unsigned U) {
  return U == 0 ? CVariant::kAllMultiplier : CVariant::kOddMultiplier;
}

struct BoundInputs {
  double log_a = 0.0;
  unsigned U = 0;
  unsigned m = 0;
  bool a_plus_1_square = false;  // only consulted when U == 0

  void validate() const {
    if (!(log_a >= kLog2 * (1 - 1e-12))) throw std::invalid_argument("log a must be >= log 2");
    if (U > 200) throw std::invalid_argument("U too large");
  }
  double log_multiplier() const { return std::log(4.0 * m + 2.0); }
};

struct S0T0 {
  std::int64_t s0 = 0;
  std::int64_t t0 = 0;
};

inline S0T0 s0_t0(const BoundInputs& in) {
  in.validate();
  const double x = std::ldexp(in.log_a, static_cast<int>(in.U)) / ((in.U + 1) * kLog2);
  S0T0 out;
  out.s0 = robust_floor(x);
  out.t0 = 2 * out.s0 + ((in.U == 0 && in.a_plus_1_square) ? 1 : 0);
  return out;
}

// floor(2^U d log a / log(2^{U+1} d)), the cap on primes of order exactly 2^{U+1} d.
inline std::int64_t k0(double log_a, unsigned U, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("k0: d must be positive");
  const double two_u = std::ldexp(1.0, static_cast<int>(U));
  const double dd = static_cast<double>(d);
  return robust_floor(two_u * dd * log_a / std::log(2 * two_u * dd));
}

struct Eq1Value {
  double log_value = 0.0;       // log of ((4m+2)/e^C)^{2^{U+1}} / 2^U
  std::optional<double> value;  // when representable as a double
  bool excluded = false;        // log a <= value
};

inline Eq1Value rhs_eq1(const BoundInputs& in, CVariant variant) {
  in.validate();
  Eq1Value out;
  const double C = constant_C(in.U, variant);
  out.log_value = std::ldexp(in.log_multiplier() - C, static_cast<int>(in.U + 1)) - in.U * kLog2;
  if (out.log_value < std::log(std::numeric_limits<double>::max())) {
    out.value = std::exp(out.log_value);
  }
  out.excluded = std::log(in.log_a) <= out.log_value;
  return out;
}

struct Eq2Value {
  bool applicable = false;  // false when t0 == 0
  double value = 0.0;
  double threshold = 0.0;   // log(4m+2) - C
  bool excluded = false;    // value < threshold, or vacuous when not applicable
};

inline Eq2Value rhs_eq2(const BoundInputs& in, CVariant variant) {
  const S0T0 st = s0_t0(in);
  Eq2Value out;
  out.threshold = in.log_multiplier() - constant_C(in.U, variant);
  if (st.t0 <= 0) {
    out.excluded = true;  // r <= t0 = 0 leaves only the r = 0 case
    return out;
  }
  out.applicable = true;
  const double lt = std::log(static_cast<double>(st.t0));
  const double two_u1 = std::ldexp(1.0, static_cast<int>(in.U + 1));
  const double log_2u_loga = in.U * kLog2 + std::log(in.log_a);
  out.value = std::exp((1 + lt) / two_u1) / two_u1 *
              (log_2u_loga + (in.U + 1) * (1 + lt) * kLog2 + lt * lt / 2 + constant_c());
  out.excluded = out.value < out.threshold;
  return out;
}

struct R0Value {
  double value = 0.0;  // upper bound on log sigma-ratio when n = 2^U
  bool excluded = false;
};

inline R0Value r0_upper(const BoundInputs& in, CVariant variant) {
  in.validate();
  R0Value out;
  out.value = constant_C(in.U, variant) +
              (in.U * kLog2 + std::log(in.log_a)) / std::ldexp(1.0, static_cast<int>(in.U + 1));
  out.excluded = out.value < in.log_multiplier();
  return out;
}

struct BoundReport {
  BoundInputs inputs;
  CVariant variant = CVariant::kAllMultiplier;
  std::int64_t s0 = 0;
  std::int64_t t0 = 0;
  double c = 0.0;
  double C_odd = 0.0;
  double C_all = 0.0;
  Eq1Value eq1;
  Eq2Value eq2;
  R0Value r0;
  bool excluded_r0 = false;
  bool excluded_rpos = false;
};

inline BoundReport bound_report(const BoundInputs& in) {
  BoundReport rep;
  rep.inputs = in;
  rep.variant = default_variant(in.U);
  const S0T0 st = s0_t0(in);
  rep.s0 = st.s0;
  rep.t0 = st.t0;
  rep.c = constant_c();
  rep.C_odd = constant_C(in.U, CVariant::kOddMultiplier);
  rep.C_all = constant_C(in.U, CVariant::kAllMultiplier);
  rep.eq1 = rhs_eq1(in, rep.variant);
  rep.eq2 = rhs_eq2(in, rep.variant);
  rep.r0 = r0_upper(in, rep.variant);
  rep.excluded_r0 = rep.r0.excluded;
  rep.excluded_rpos = rep.eq2.excluded;
  return rep;
}

struct DivisorSumEstimate {
  double value = 0.0;
  bool congruence_ok = true;  // every p = 1 (mod 2^{U+1})
};

// prod p/(p-1) * ( log(2^U log a)/2^{U+1} + sum log p / (2^{U+1} (p-1)) ).
inline DivisorSumEstimate divisor_sum_estimate(double log_a, unsigned U,
                                               std::span<const std::uint64_t> primes) {
  const double two_u1 = std::ldexp(1.0, static_cast<int>(U + 1));
  const std::uint64_t modulus = std::uint64_t{1} << (U + 1);
  DivisorSumEstimate out;
  double product = 1.0;
  double inner = (U * kLog2 + std::log(log_a)) / two_u1;
  for (std::uint64_t p : primes) {
    if (p < 3) throw std::invalid_argument("divisor_sum_estimate: primes must be odd");
    if (p % modulus != 1) out.congruence_ok = false;
    const double pd = static_cast<double>(p);
    product *= pd / (pd - 1);
    inner += std::log(pd) / (two_u1 * (pd - 1));
  }
  out.value = product * inner;
  return out;
}

enum class ProductBoundStatus { kHolds, kFails, kPreconditionViolated };

struct ProductBound {
  ProductBoundStatus status = ProductBoundStatus::kHolds;
  double product = 1.0;  // prod p/(p-1)
  double minimal = 1.0;  // prod (2^{U+1}k+1)/(2^{U+1}k)
  double exp_bound = 1.0;
  std::string detail;
};

// prod p_i/(p_i-1) <= prod_k (2^{U+1}k+1)/(2^{U+1}k) < exp((1+log r)/2^{U+1})
// for distinct primes p_i = 1 (mod 2^{U+1}). The first relation is an
// equality when the p_i are exactly 2^{U+1}k+1, k = 1..r.
inline ProductBound product_bound_check(std::span<const std::uint64_t> primes, unsigned U) {
  ProductBound out;
  const std::uint64_t modulus = std::uint64_t{1} << (U + 1);
  std::vector<std::uint64_t> sorted(primes.begin(), primes.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] % modulus != 1) {
      out.status = ProductBoundStatus::kPreconditionViolated;
      out.detail = std::to_string(sorted[i]) + " is not 1 mod 2^(U+1)";
      return out;
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      out.status = ProductBoundStatus::kPreconditionViolated;
      out.detail = "repeated prime " + std::to_string(sorted[i]);
      return out;
    }
  }
  const std::size_t r = sorted.size();
  if (r == 0) return out;

  const double step = static_cast<double>(modulus);
  for (std::size_t k = 1; k <= r; ++k) {
    const double pd = static_cast<double>(sorted[k - 1]);
    out.product *= pd / (pd - 1);
    out.minimal *= (step * k + 1) / (step * k);
  }
  out.exp_bound = std::exp((1 + std::log(static_cast<double>(r))) / step);
  const bool first = out.product <= out.minimal * (1 + 1e-15);
  const bool second = out.minimal < out.exp_bound;
  out.status = (first && second) ? ProductBoundStatus::kHolds : ProductBoundStatus::kFails;
  return out;
}

struct TailSumResult {
  std::uint64_t p = 0;
  double exact_sum = 0.0;  // sum over f1 >= 1, f2 >= 0 of log(3^f2 p^f1) / (2 * 3^f2 p^f1)
  double loose_cap = 0.0;  // (3p/(2(p-1))) (log3/(2p) + log p/(p-1)), exactly twice exact_sum
};

// Closed form via sum_{i>=0} i/q^i = q/(q-1)^2.
inline TailSumResult two_prime_tail_sum(std::uint64_t p) {
  if (p <= 3 || p % 2 == 0) throw std::invalid_argument("two_prime_tail_sum: p must be odd and > 3");
  const double pd = static_cast<double>(p);
  const double lp = std::log(pd);
  TailSumResult out;
  out.p = p;
  out.exact_sum = 0.5 * (lp * 1.5 * pd / ((pd - 1) * (pd - 1)) + kLog3 * 0.75 / (pd - 1));
  out.loose_cap = (3 * pd / (2 * (pd - 1))) * (kLog3 / (2 * pd) + lp / (pd - 1));
  return out;
}

struct SweepRow {
  unsigned U = 0;
  double r0_upper = 0.0;
  double rhs_eq2 = 0.0;
  double threshold = 0.0;  // log(4m+2) - C(U)
  bool excluded = false;
};

// a = 2: both the r = 0 bound and the r > 0 bound fall below log(4m+2).
inline std::vector<SweepRow> base2_exclusion_sweep(unsigned U_min, unsigned U_max, unsigned m) {
  if (U_min < 4) throw std::invalid_argument("base2_exclusion_sweep: U_min must be >= 4");
  if (U_max < U_min) throw std::invalid_argument("base2_exclusion_sweep: empty range");
  std::vector<SweepRow> rows;
  for (unsigned U = U_min; U <= U_max; ++U) {
    const BoundInputs in{kLog2, U, m, false};
    const CVariant v = default_variant(U);
    const auto r0 = r0_upper(in, v);
    const auto eq2 = rhs_eq2(in, v);
    rows.push_back({U, r0.value, eq2.value, eq2.threshold, r0.excluded && eq2.excluded});
  }
  return rows;
}

}  // namespace apnkit::bounds
