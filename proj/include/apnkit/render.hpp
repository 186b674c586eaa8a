#pragma once

// JSON views of library results. Exact values are decimal strings; reals are
// doubles, rounded at output time by round_reals.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

#include "apnkit/bounds.hpp"
#include "apnkit/chain.hpp"
#include "apnkit/factor.hpp"
#include "apnkit/search.hpp"

namespace apnkit::render {

using Json = nlohmann::ordered_json;

inline constexpr int kDefaultPrecision = 10;

// Rounds every floating-point leaf to `digits` significant digits, so the
// serialized form is fixed by the precision rather than by the last ulp.
inline void round_reals(Json& j, int digits) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      j = nullptr;
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    j = std::strtod(buf, nullptr);
    return;
  }
  if (j.is_structured()) {
    for (auto& child : j) round_reals(child, digits);
  }
}

inline Json factors(const Factorization& f) {
  Json arr = Json::array();
  for (const auto& e : f.entries()) {
    arr.push_back({{"p", to_decimal(e.prime)}, {"e", std::to_string(e.exponent)}});
  }
  return arr;
}

inline std::string factor_string(const Factorization& f) {
  if (f.empty()) return "1";
  std::string s;
  for (const auto& e : f.entries()) {
    if (!s.empty()) s += " * ";
    s += to_decimal(e.prime);
    if (e.exponent > 1) s += "^" + std::to_string(e.exponent);
  }
  return s;
}

inline Json factor_result(const Natural& n, const FactorResult& r) {
  Json j;
  j["n"] = to_decimal(n);
  j["complete"] = r.complete();
  j["factors"] = factors(r.found);
  j["cofactor"] = to_decimal(r.cofactor);
  j["probabilistic"] = r.found.probabilistic();
  j["ops_used"] = r.ops_used;
  if (!r.complete()) j["reason"] = r.reason;
  return j;
}

inline Json split(const std::optional<SquarefreeSplit>& s) {
  if (!s) return nullptr;
  return {{"kernel", to_decimal(s->kernel)}, {"root", to_decimal(s->root)}};
}

inline Json exp_form(const ExpForm& f) {
  Json odd = Json::array();
  for (const auto& pp : f.odd_part) {
    odd.push_back({{"p", std::to_string(pp.prime)}, {"e", std::to_string(pp.exponent)}});
  }
  return {{"a", to_decimal(f.a)}, {"n", std::to_string(f.n)}, {"U", f.U}, {"odd_part", odd},
          {"r", f.r()}};
}

inline Json chain(const FactorChain& c, const std::vector<StepReport>& steps) {
  Json j;
  j["form"] = exp_form(c.form);
  j["s"] = c.s ? Json(*c.s) : Json(nullptr);
  j["complete"] = c.complete;
  if (!c.complete) j["inconclusive_reason"] = c.inconclusive_reason;
  Json levels = Json::array();
  for (const auto& lvl : c.levels) {
    Json l;
    l["i"] = lvl.index;
    l["M"] = to_decimal(lvl.M);
    l["L"] = to_decimal(lvl.L);
    l["M_factors"] = lvl.M_factors ? factors(*lvl.M_factors) : Json(nullptr);
    l["E_Y"] = split(lvl.split_M);
    l["D_X"] = split(lvl.split_L);
    l["step"] = step_kind_name(lvl.step.kind);
    if (lvl.step.kind == StepKind::kSharedPrime) l["shared_prime"] = to_decimal(lvl.step.prime);
    if (lvl.index > 0) {
      l["gcd"] = to_decimal(lvl.shared_gcd);
      l["congruence"] = verify_congruence(c, lvl.index);
    }
    if (!lvl.factor_note.empty()) l["factor_note"] = lvl.factor_note;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  Json reports = Json::array();
  for (const auto& s : steps) {
    reports.push_back({{"i", s.index},
                       {"step", step_kind_name(s.step.kind)},
                       {"violations", s.violations},
                       {"skipped", s.skipped}});
  }
  j["steps"] = std::move(reports);
  j["kernel_growth"] = kernel_growth_check(c);
  j["r_bound"] = c.s ? Json(r_bound_check(c)) : Json(nullptr);
  return j;
}

inline Json bound_report(const bounds::BoundReport& b) {
  Json j;
  j["inputs"] = {{"log_a", b.inputs.log_a},
                 {"U", b.inputs.U},
                 {"m", b.inputs.m},
                 {"a_plus_1_square", b.inputs.a_plus_1_square}};
  j["variant"] = bounds::variant_name(b.variant);
  j["s0"] = b.s0;
  j["t0"] = b.t0;
  j["c"] = b.c;
  j["C_odd"] = b.C_odd;
  j["C_all"] = b.C_all;
  j["rhs_eq1"] = {{"log_value", b.eq1.log_value},
                  {"value", b.eq1.value ? Json(*b.eq1.value) : Json(nullptr)},
                  {"loglog_a", std::log(b.inputs.log_a)},
                  {"excluded", b.eq1.excluded}};
  j["rhs_eq2"] = {{"applicable", b.eq2.applicable},
                  {"value", b.eq2.value},
                  {"threshold", b.eq2.threshold},
                  {"excluded", b.eq2.excluded}};
  j["r0_upper"] = {{"value", b.r0.value}, {"excluded", b.r0.excluded}};
  j["excluded_r0"] = b.excluded_r0;
  j["excluded_rpos"] = b.excluded_rpos;
  j["verdict"] = (b.excluded_r0 && b.excluded_rpos) ? "Excluded" : "NotExcluded";
  return j;
}

inline Json cell_notes(const std::vector<search::CellNote>& notes) {
  Json arr = Json::array();
  for (const auto& c : notes) {
    arr.push_back({{"a", to_decimal(c.a)}, {"n", to_decimal(c.n)}, {"reason", c.reason}});
  }
  return arr;
}

inline Json scan_report(const search::ScanReport& r) {
  Json j;
  j["family"] = r.family;
  j["ranges"] = {{"a_min", to_decimal(r.a_min)},
                 {"a_max", to_decimal(r.a_max)},
                 {"n_min", to_decimal(r.n_min)},
                 {"n_max", to_decimal(r.n_max)}};
  j["bit_cap"] = r.bit_cap;
  j["budget"] = {{"trial", r.budget.trial_limit},
                 {"rho", r.budget.rho_iterations},
                 {"ops", r.budget.overall_op_cap}};
  Json findings = Json::array();
  for (const auto& f : r.findings) {
    findings.push_back({{"a", to_decimal(f.a)},
                        {"n", to_decimal(f.n)},
                        {"N", to_decimal(f.N)},
                        {"m", to_decimal(f.m)},
                        {"parity", f.even() ? "even" : "odd"},
                        {"factors", factors(f.factors)}});
  }
  j["findings"] = std::move(findings);
  j["counts"] = {{"scanned", r.scanned()},
                 {"findings", r.findings.size()},
                 {"refuted", r.refuted.size()},
                 {"inconclusive", r.inconclusive.size()},
                 {"skipped", r.skipped.size()}};
  j["refuted"] = cell_notes(r.refuted);
  j["inconclusive"] = cell_notes(r.inconclusive);
  j["skipped"] = cell_notes(r.skipped);
  return j;
}

inline std::string scan_csv(const search::ScanReport& r) {
  std::string out = "a,n,N_digits,m,parity\n";
  for (const auto& f : r.findings) {
    out += to_decimal(f.a) + "," + to_decimal(f.n) + "," + std::to_string(decimal_digits(f.N)) + "," +
           to_decimal(f.m) + "," + (f.even() ? "even" : "odd") + "\n";
  }
  return out;
}

inline Json census(const Natural& a, unsigned U, const std::vector<search::CensusRow>& rows) {
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json primes = Json::array();
    for (const auto& p : row.primes) primes.push_back(to_decimal(p));
    Json r = {{"d", row.d}, {"order", std::to_string((std::uint64_t{2} << U) * row.d)},
              {"primes", primes}, {"count", row.primes.size()}, {"k0", row.k0}, {"ok", row.ok}};
    if (row.inconclusive) r["inconclusive"] = *row.inconclusive;
    arr.push_back(std::move(r));
  }
  return {{"a", to_decimal(a)}, {"U", U}, {"rows", arr}};
}

inline Json nn(const search::NnReduction& r) {
  return {{"n", r.n},
          {"u", r.u},
          {"s", r.s},
          {"N1", to_decimal(r.N1)},
          {"N2", to_decimal(r.N2)},
          {"gcd", to_decimal(r.gcd)},
          {"coprime", r.coprime},
          {"N1_square", r.N1_square},
          {"N1_split", split(r.split_N1)},
          {"N2_split", split(r.split_N2)},
          {"ok", r.ok()}};
}

// Indented "key: value" lines for the text format.
inline void text_lines(const Json& j, std::string& out, const std::string& indent = {}) {
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [&](const Json& arr) {
    for (const auto& v : arr) {
      if (v.is_structured()) return false;
    }
    return true;
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      if (v.is_object() || (v.is_array() && !flat(v))) {
        out += indent + it.key() + ":\n";
        text_lines(v, out, indent + "  ");
      } else if (v.is_array()) {
        std::string joined;
        for (const auto& x : v) joined += (joined.empty() ? "" : ", ") + scalar(x);
        out += indent + it.key() + ": " + (v.empty() ? "-" : joined) + "\n";
      } else {
        out += indent + it.key() + ": " + scalar(v) + "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i].is_structured()) {
        out += indent + "- [" + std::to_string(i) + "]\n";
        text_lines(j[i], out, indent + "  ");
      } else {
        out += indent + "- " + scalar(j[i]) + "\n";
      }
    }
  } else {
    out += indent + scalar(j) + "\n";
  }
}

}  // namespace apnkit::render
