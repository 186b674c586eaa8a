#pragma once

// Machine-checkable leaves of the base-2 case analysis and a verifier for
// them. Every claim other than an axiom is decided by modular arithmetic,
// factoring within budget, or a floating-point comparison with a margin.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "apnkit/bounds.hpp"
#include "apnkit/factor.hpp"
#include "apnkit/natural.hpp"
#include "apnkit/ntcore.hpp"
#include "apnkit/parallel.hpp"
#include "apnkit/verdict.hpp"

namespace apnkit::certs {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Largest a^n + 1 the verifier will materialize.
inline constexpr std::size_t kMaterializeBitCap = std::size_t{1} << 20;

// Real-valued "x < cap" claims need this relative margin to count as proven.
inline constexpr double kRealMargin = 1e-9;

struct FactorizationClaim {
  Natural a;
  Natural n;
  std::vector<PrimePower> factors;
};

struct ExactOnceClaim {
  Natural a;
  std::string n_description;
  Natural p;
  std::vector<Natural> instances;
};

struct TwoExactOnceRefutation {
  Natural a;
  Natural n;
  Natural p;
  Natural q;
};

struct OrderClaim {
  Natural a;
  Natural p;
  Natural k;
};

struct PrimeClaim {
  Natural p;
};

struct AbundancyCapClaim {
  Natural a;
  Natural n;
  std::vector<PrimePower> factors;  // of a^n + 1
  Rational log_term;
  Rational cap;
};

struct TailSumCapClaim {
  Natural p;
  Rational cap;
};

struct NotMultiperfectClaim {
  Natural a;
  Natural n;
  std::vector<Natural> classes;
  std::optional<Natural> sigma;  // asserted sigma(a^n+1), checked when present
};

struct AxiomClaim {
  std::string name;
  std::string statement;
};

using ClaimBody =
    std::variant<FactorizationClaim, ExactOnceClaim, TwoExactOnceRefutation, OrderClaim,
                 PrimeClaim, AbundancyCapClaim, TailSumCapClaim, NotMultiperfectClaim, AxiomClaim>;

struct Claim {
  std::string id;
  ClaimBody body;
  std::string note;
};

inline const char* claim_kind(const ClaimBody& body) {
  struct Namer {
    const char* operator()(const FactorizationClaim&) const { return "factorization"; }
    const char* operator()(const ExactOnceClaim&) const { return "exact_once"; }
    const char* operator()(const TwoExactOnceRefutation&) const {
      return "two_exact_once_refutation";
    }
    const char* operator()(const OrderClaim&) const { return "order"; }
    const char* operator()(const PrimeClaim&) const { return "prime"; }
    const char* operator()(const AbundancyCapClaim&) const { return "abundancy_cap"; }
    const char* operator()(const TailSumCapClaim&) const { return "tail_sum_cap"; }
    const char* operator()(const NotMultiperfectClaim&) const { return "not_multiperfect"; }
    const char* operator()(const AxiomClaim&) const { return "axiom"; }
  };
  return std::visit(Namer{}, body);
}

struct Certificate {
  int schema_version = kSchemaVersion;
  std::string title;
  std::vector<Claim> claims;
  std::vector<std::string> notes;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ClaimResult {
  std::string id;
  std::string kind;
  Verdict verdict;
  Json witness = Json::object();
  double elapsed_ms = 0.0;
};

struct VerificationResult {
  std::vector<ClaimResult> claims;
  Outcome overall = Outcome::kProven;

  std::size_t count(Outcome o) const {
    std::size_t k = 0;
    for (const auto& c : claims) k += c.verdict.outcome == o ? 1 : 0;
    return k;
  }
};

namespace detail {

inline std::optional<unsigned long> small_exponent(const Natural& n) {
  if (!mpz_fits_ulong_p(n.get_mpz_t())) return std::nullopt;
  return mpz_get_ui(n.get_mpz_t());
}

// a^n + 1, or nullopt above the materialization cap.
inline std::optional<Natural> materialize(const Natural& a, const Natural& n) {
  const auto e = small_exponent(n);
  if (!e || log2_power(a, *e) > static_cast<double>(kMaterializeBitCap)) return std::nullopt;
  return power_plus_one(a, *e);
}

inline Json factors_json(const std::vector<PrimePower>& f) {
  Json arr = Json::array();
  for (const auto& e : f) {
    arr.push_back({{"p", to_decimal(e.prime)}, {"e", std::to_string(e.exponent)}});
  }
  return arr;
}

// "value < cap" with a relative margin; ties within the margin are not decided.
inline Verdict strict_less(double value, double cap, const std::string& what) {
  const double tol = kRealMargin * std::max(1.0, std::fabs(cap));
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s = %.12g vs cap %.12g", what.c_str(), value, cap);
  if (cap - value > tol) return Verdict::proven(buf);
  if (value - cap > tol || value >= cap) return Verdict::refuted(buf);
  return Verdict::inconclusive(std::string(buf) + " (inside floating-point margin)");
}

// Checks that `factors` are primes multiplying to a^n + 1.
inline std::optional<Verdict> check_factor_list(const Natural& a, const Natural& n,
                                                const std::vector<PrimePower>& factors,
                                                Json& witness) {
  const auto value = materialize(a, n);
  if (!value) return Verdict::inconclusive("a^n+1 too large to materialize");
  Natural product = 1;
  bool probabilistic = false;
  for (const auto& e : factors) {
    const auto pr = test_primality(e.prime);
    if (!pr.prime) return Verdict::refuted(to_decimal(e.prime) + " is not prime");
    probabilistic = probabilistic || pr.probabilistic;
    product *= power(e.prime, e.exponent);
  }
  witness["value"] = to_decimal(*value);
  witness["product"] = to_decimal(product);
  witness["probabilistic_primality"] = probabilistic;
  if (product != *value) return Verdict::refuted("product of factors differs from a^n+1");
  return std::nullopt;
}

inline std::optional<Verdict> require_odd_prime(const Natural& p, const Natural& a,
                                                const std::string& role) {
  if (p < 3 || !is_prime(p)) return Verdict::refuted(role + " = " + to_decimal(p) + " is not an odd prime");
  if (divides(p, a)) return Verdict::refuted(role + " divides the base");
  return std::nullopt;
}

struct ClaimVerifier {
  const FactorBudget& budget;
  Json& witness;

  Verdict operator()(const FactorizationClaim& c) const {
    if (auto bad = check_factor_list(c.a, c.n, c.factors, witness)) return *bad;
    return Verdict::proven("a^n+1 equals the product of the listed primes");
  }

  Verdict operator()(const ExactOnceClaim& c) const {
    if (auto bad = require_odd_prime(c.p, c.a, "p")) return *bad;
    const Natural p2 = c.p * c.p;
    Json rows = Json::array();
    std::optional<Verdict> failure;
    for (const auto& n : c.instances) {
      const Natural residue = power_plus_one_residue(c.a, n, p2);
      const bool once = residue != 0 && divides(c.p, residue);
      rows.push_back({{"n", to_decimal(n)}, {"residue_mod_p2", to_decimal(residue)}, {"exact_once", once}});
      if (!once && !failure) {
        failure = Verdict::refuted("p does not divide a^n+1 exactly once for n = " + to_decimal(n));
      }
    }
    witness["instances"] = std::move(rows);
    if (failure) return *failure;
    return Verdict::proven("exactly once for all " + std::to_string(c.instances.size()) + " instances");
  }

  Verdict operator()(const TwoExactOnceRefutation& c) const {
    if (c.p == c.q) return Verdict::refuted("p and q must be distinct");
    for (const auto* prime : {&c.p, &c.q}) {
      if (auto bad = require_odd_prime(*prime, c.a, "prime")) return *bad;
    }
    Json rows = Json::array();
    bool all = true;
    for (const auto* prime : {&c.p, &c.q}) {
      const Natural residue = power_plus_one_residue(c.a, c.n, *prime * *prime);
      const bool once = residue != 0 && divides(*prime, residue);
      all = all && once;
      rows.push_back({{"p", to_decimal(*prime)}, {"residue_mod_p2", to_decimal(residue)}, {"exact_once", once}});
    }
    witness["primes"] = std::move(rows);
    if (!all) return Verdict::refuted("a prime does not divide a^n+1 exactly once");
    return Verdict::proven("two distinct primes divide a^n+1 exactly once, so a^n+1 != p x^2");
  }

  Verdict operator()(const OrderClaim& c) const {
    if (!is_prime(c.p)) return Verdict::refuted(to_decimal(c.p) + " is not prime");
    if (divides(c.p, c.a)) return Verdict::refuted("p divides a");
    if (c.k < 1) return Verdict::refuted("order must be positive");
    const Natural full = pow_mod(c.a, c.k, c.p);
    witness["a_pow_k_mod_p"] = to_decimal(full);
    if (full != 1) return Verdict::refuted("a^k != 1 mod p");
    const FactorResult fk = factor(c.k, budget);
    if (!fk.complete()) return Verdict::inconclusive("cannot factor k: " + fk.reason);
    Json proper = Json::array();
    for (const auto& e : fk.found.entries()) {
      const Natural r = pow_mod(c.a, exact_quotient(c.k, e.prime), c.p);
      proper.push_back({{"q", to_decimal(e.prime)}, {"a_pow_k_over_q_mod_p", to_decimal(r)}});
      if (r == 1) {
        witness["proper_divisors"] = std::move(proper);
        return Verdict::refuted("a^(k/" + to_decimal(e.prime) + ") = 1 mod p, order is smaller");
      }
    }
    witness["proper_divisors"] = std::move(proper);
    return Verdict::proven("a^k = 1 and a^(k/q) != 1 for every prime q | k");
  }

  Verdict operator()(const PrimeClaim& c) const {
    const auto pr = test_primality(c.p);
    witness["probabilistic"] = pr.probabilistic;
    if (!pr.prime) return Verdict::refuted(to_decimal(c.p) + " is composite");
    return Verdict::proven(pr.probabilistic ? "strong probable prime" : "deterministic Miller-Rabin");
  }

  Verdict operator()(const AbundancyCapClaim& c) const {
    if (auto bad = check_factor_list(c.a, c.n, c.factors, witness)) return *bad;
    const Factorization f = Factorization::from_entries(c.factors);
    const Rational ratio = sigma_ratio(f);
    const double value = to_double(ratio) * std::exp(to_double(c.log_term));
    witness["sigma_ratio"] = to_string(ratio);
    witness["bounded_value"] = value;
    return strict_less(value, to_double(c.cap), "sigma-ratio * e^term");
  }

  Verdict operator()(const TailSumCapClaim& c) const {
    const auto small = to_u64(c.p);
    if (!small || *small <= 3 || !is_prime(c.p)) {
      return Verdict::refuted(to_decimal(c.p) + " is not a prime above 3");
    }
    const auto tail = bounds::two_prime_tail_sum(*small);
    witness["exact_sum"] = tail.exact_sum;
    witness["loose_cap"] = tail.loose_cap;
    return strict_less(tail.exact_sum, to_double(c.cap), "tail sum");
  }

  Verdict operator()(const NotMultiperfectClaim& c) const {
    const auto value = materialize(c.a, c.n);
    if (!value) return Verdict::inconclusive("a^n+1 too large to materialize");
    const FactorResult fr = factor(*value, budget);
    if (!fr.complete()) return Verdict::inconclusive("cannot factor a^n+1: " + fr.reason);
    const Natural s = sigma(fr.found);
    witness["value"] = to_decimal(*value);
    witness["sigma"] = to_decimal(s);
    witness["sigma_ratio"] = to_string(sigma_ratio(fr.found));
    if (c.sigma && *c.sigma != s) return Verdict::refuted("asserted sigma differs from sigma(a^n+1)");
    for (const auto& m : c.classes) {
      if (s == m * *value) return Verdict::refuted("sigma(a^n+1) = " + to_decimal(m) + " (a^n+1)");
    }
    return Verdict::proven("sigma(a^n+1) is not a listed multiple of a^n+1");
  }

  Verdict operator()(const AxiomClaim&) const { return Verdict::recorded(); }
};

}  // namespace detail

inline ClaimResult verify_claim(const Claim& claim, const FactorBudget& budget = {}) {
  ClaimResult out;
  out.id = claim.id;
  out.kind = claim_kind(claim.body);
  const auto start = std::chrono::steady_clock::now();
  out.verdict = std::visit(detail::ClaimVerifier{budget, out.witness}, claim.body);
  out.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline void validate(const Certificate& cert) {
  if (cert.schema_version != kSchemaVersion) {
    throw SchemaError("/schema_version", "unsupported version " + std::to_string(cert.schema_version));
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < cert.claims.size(); ++i) {
    const auto& id = cert.claims[i].id;
    const std::string path = "/claims/" + std::to_string(i) + "/id";
    if (id.empty()) throw SchemaError(path, "empty claim id");
    if (!seen.insert(id).second) throw SchemaError(path, "duplicate claim id '" + id + "'");
  }
}

inline VerificationResult verify_certificate(const Certificate& cert,
                                             const FactorBudget& budget = {},
                                             unsigned jobs = 1) {
  validate(cert);
  VerificationResult out;
  out.claims = ordered_parallel_map(cert.claims.size(), jobs,
                                    [&](std::size_t i) { return verify_claim(cert.claims[i], budget); });
  bool any_refuted = false;
  bool any_open = false;
  for (const auto& r : out.claims) {
    any_refuted = any_refuted || r.verdict.is_refuted();
    any_open = any_open || r.verdict.is_inconclusive();
  }
  out.overall = any_refuted ? Outcome::kRefuted
                : any_open  ? Outcome::kInconclusive
                            : Outcome::kProven;
  return out;
}

}  // namespace apnkit::certs
