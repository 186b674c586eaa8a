#pragma once

// Command-line front end. run() never calls exit(); it returns the process
// exit code and writes to the given streams.
//
// Exit codes: 0 success/Proven, 1 Refuted or finding mismatch, 2 Inconclusive,
// 3 usage or input error (a one-line JSON object on the error stream).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "apnkit/base2_certificate.hpp"
#include "apnkit/bounds.hpp"
#include "apnkit/certs.hpp"
#include "apnkit/certs_io.hpp"
#include "apnkit/chain.hpp"
#include "apnkit/ntcore.hpp"
#include "apnkit/render.hpp"
#include "apnkit/search.hpp"

namespace apnkit::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kRefuted = 1, kInconclusive = 2, kUsage = 3 };

inline constexpr const char* kBudgetEnv = "APNKIT_BUDGET";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string format = "json";
  int precision = render::kDefaultPrecision;
  unsigned jobs = 1;
  bool timing = false;
  std::string budget_text;
  std::optional<std::uint64_t> trial, rho, ops;
  std::size_t bit_cap = 0;  // 0: subcommand default
  unsigned emax = certs::kDefaultEmax;

  FactorBudget budget() const {
    FactorBudget b;
    if (const char* env = std::getenv(kBudgetEnv); env != nullptr && *env != '\0') {
      b = parse_budget(env, b);
    }
    if (!budget_text.empty()) b = parse_budget(budget_text, b);
    if (trial) b.trial_limit = *trial;
    if (rho) b.rho_iterations = *rho;
    if (ops) b.overall_op_cap = *ops;
    b.validate();
    return b;
  }
  std::size_t cap_or(std::size_t fallback) const { return bit_cap == 0 ? fallback : bit_cap; }
};

struct Result {
  Json doc;
  int code = kOk;
  std::optional<std::string> csv;   // tabular view, when the subcommand has one
  std::optional<std::string> text;  // custom text view
};

namespace detail {

inline Natural arg_natural(const std::string& s, const char* what) {
  try {
    return parse_natural(s);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(what) + " must be a nonnegative decimal integer, got '" + s + "'");
  }
}

inline std::uint64_t arg_u64(const std::string& s, const char* what) {
  const auto v = to_u64(arg_natural(s, what));
  if (!v) throw UsageError(std::string(what) + " is too large");
  return *v;
}

inline Result cmd_factor(const Config& cfg, const std::string& arg) {
  const Natural n = arg_natural(arg, "N");
  if (n < 1) throw UsageError("N must be >= 1");
  const FactorResult fr = factor(n, cfg.budget());
  Result r{render::factor_result(n, fr), fr.complete() ? kOk : kInconclusive};
  std::string csv = "p,e\n";
  for (const auto& e : fr.found.entries()) csv += to_decimal(e.prime) + "," + std::to_string(e.exponent) + "\n";
  r.csv = csv;
  return r;
}

inline Result cmd_sigma(const Config& cfg, const std::string& arg) {
  const Natural n = arg_natural(arg, "N");
  if (n < 1) throw UsageError("N must be >= 1");
  const FactorResult fr = factor(n, cfg.budget());
  Json j;
  j["n"] = to_decimal(n);
  if (!fr.complete()) {
    j["factorization"] = render::factor_result(n, fr);
    return {j, kInconclusive};
  }
  j["factors"] = render::factors(fr.found);
  j["sigma"] = to_decimal(sigma(fr.found));
  j["sigma_ratio"] = to_string(sigma_ratio(fr.found));
  const auto m = multiperfect_class(fr.found);
  j["multiperfect_class"] = m ? Json(to_decimal(*m)) : Json(nullptr);
  const auto euler = euler_form_check(fr.found);
  j["euler_form"] = euler ? Json{{"p", to_decimal(euler->prime)}, {"x", to_decimal(euler->root)}}
                          : Json(nullptr);
  return {j, kOk};
}

inline Result cmd_order(const Config& cfg, const std::string& a_arg, const std::string& p_arg) {
  const Natural a = arg_natural(a_arg, "A");
  const Natural p = arg_natural(p_arg, "P");
  if (!is_prime(p)) throw UsageError("P must be prime");
  if (divides(p, a)) throw UsageError("P must not divide A");
  const auto ord = multiplicative_order(a, p, cfg.budget());
  Json j{{"a", to_decimal(a)}, {"p", to_decimal(p)}};
  if (const Natural* k = value_if(ord)) {
    j["order"] = to_decimal(*k);
    return {j, kOk};
  }
  j["order"] = nullptr;
  j["reason"] = std::get<Inconclusive>(ord).reason;
  return {j, kInconclusive};
}

inline std::string chain_text(const FactorChain& c, const std::vector<StepReport>& steps) {
  std::string out = "a = " + to_decimal(c.form.a) + ", n = " + std::to_string(c.form.n) +
                    ", U = " + std::to_string(c.form.U) + ", r = " + std::to_string(c.r());
  out += ", s = " + (c.s ? std::to_string(*c.s) : std::string("?")) + "\n";
  for (const auto& lvl : c.levels) {
    const std::string i = std::to_string(lvl.index);
    out += "M_" + i + " = " + to_decimal(lvl.M);
    if (lvl.M_factors) out += " = " + render::factor_string(*lvl.M_factors);
    out += "\n  L_" + i + " = " + to_decimal(lvl.L);
    if (lvl.split_M) out += ", E_" + i + " = " + to_decimal(lvl.split_M->kernel);
    if (lvl.split_L) out += ", D_" + i + " = " + to_decimal(lvl.split_L->kernel);
    out += "\n";
    if (lvl.index == 0) continue;
    out += "  step " + i + ": ";
    switch (lvl.step.kind) {
      case StepKind::kCoprime: out += "(i) coprime"; break;
      case StepKind::kSharedPrime: out += "(ii) shared prime " + to_decimal(lvl.step.prime); break;
      default: out += step_kind_name(lvl.step.kind); break;
    }
    out += verify_congruence(c, lvl.index) ? ", M_i = P_i mod L_{i-1}\n" : ", congruence FAILS\n";
  }
  for (const auto& s : steps) {
    for (const auto& v : s.violations) out += "violation: " + v + "\n";
  }
  out += std::string("kernel growth: ") + (kernel_growth_check(c) ? "ok" : "FAILS") + "\n";
  if (c.s) out += std::string("r <= 2s(+1): ") + (r_bound_check(c) ? "yes" : "no") + "\n";
  return out;
}

inline Result cmd_chain(const Config& cfg, const std::string& a_arg, const std::string& n_arg) {
  const Natural a = arg_natural(a_arg, "A");
  if (a < 2) throw UsageError("A must be >= 2");
  const std::uint64_t n = arg_u64(n_arg, "N");
  if (n < 1) throw UsageError("N must be >= 1");
  const FactorBudget budget = cfg.budget();
  const auto form = decompose_exponent(a, n, budget);
  if (const auto* bad = std::get_if<Inconclusive>(&form)) {
    return {Json{{"a", to_decimal(a)}, {"n", std::to_string(n)}, {"reason", bad->reason}}, kInconclusive};
  }
  ChainOptions opts;
  opts.bit_cap = cfg.cap_or(kDefaultChainBitCap);
  opts.jobs = cfg.jobs;
  const FactorChain c = build_chain(std::get<ExpForm>(form), budget, opts);
  const auto steps = classify_steps(c, budget);
  bool violated = !kernel_growth_check(c);
  for (std::size_t i = 1; i <= c.r(); ++i) violated = violated || !verify_congruence(c, i);
  for (const auto& s : steps) violated = violated || !s.ok();
  const int code = violated ? kRefuted : (c.complete ? kOk : kInconclusive);
  return {render::chain(c, steps), code, std::nullopt, chain_text(c, steps)};
}

inline Result cmd_bound(const std::string& a_arg, unsigned U, unsigned m, const std::string& variant) {
  const Natural a = arg_natural(a_arg, "--a");
  if (a < 2) throw UsageError("--a must be >= 2");
  const bounds::BoundInputs in{natural_log(a), U, m, is_perfect_square(a + 1)};
  bounds::BoundReport rep = bounds::bound_report(in);
  if (variant == "odd" || variant == "all") {
    const auto v = variant == "odd" ? bounds::CVariant::kOddMultiplier : bounds::CVariant::kAllMultiplier;
    rep.variant = v;
    rep.eq1 = bounds::rhs_eq1(in, v);
    rep.eq2 = bounds::rhs_eq2(in, v);
    rep.r0 = bounds::r0_upper(in, v);
    rep.excluded_r0 = rep.r0.excluded;
    rep.excluded_rpos = rep.eq2.excluded;
  }
  Json j{{"a", to_decimal(a)}};
  j.update(render::bound_report(rep));
  return {j, kOk};
}

inline Result cmd_constants(std::optional<unsigned> U, const std::string& a_arg) {
  const Natural a = arg_natural(a_arg, "--a");
  if (a < 2) throw UsageError("--a must be >= 2");
  Json j;
  const double c = bounds::constant_c();
  j["c"] = c;
  const double partial = std::log(2.0) / 2 + std::log(3.0) / 3;
  j["calibration_gap"] = partial - (bounds::kLog3 * bounds::kLog3 / 2 + c);
  Json table = Json::array();
  const unsigned lo = U ? *U : 0;
  const unsigned hi = U ? *U : 3;
  for (unsigned u = lo; u <= hi; ++u) {
    const bounds::BoundInputs in{natural_log(a), u, 0, is_perfect_square(a + 1)};
    const auto st = bounds::s0_t0(in);
    table.push_back({{"U", u},
                     {"C_odd", bounds::constant_C(u, bounds::CVariant::kOddMultiplier)},
                     {"C_all", bounds::constant_C(u, bounds::CVariant::kAllMultiplier)},
                     {"default_variant", bounds::variant_name(bounds::default_variant(u))},
                     {"s0", st.s0},
                     {"t0", st.t0}});
  }
  j["a"] = to_decimal(a);
  j["C"] = std::move(table);
  return {j, kOk};
}

inline int verdict_code(Outcome o) {
  switch (o) {
    case Outcome::kProven:
    case Outcome::kRecorded: return kOk;
    case Outcome::kRefuted: return kRefuted;
    case Outcome::kInconclusive: return kInconclusive;
  }
  return kInconclusive;
}

inline Result verification(const Config& cfg, const certs::Certificate& cert) {
  const auto res = certs::verify_certificate(cert, cfg.budget(), cfg.jobs);
  Result r{certs::to_json(res, cfg.timing), verdict_code(res.overall)};
  Json doc{{"title", cert.title}};
  doc.update(r.doc);
  r.doc = std::move(doc);
  std::string csv = "id,kind,verdict\n";
  for (const auto& c : res.claims) {
    csv += c.id + "," + c.kind + "," + std::string(outcome_name(c.verdict.outcome)) + "\n";
  }
  r.csv = csv;
  return r;
}

inline Result cmd_verify(const Config& cfg, const std::string& file) {
  return verification(cfg, certs::load_certificate(file));
}

inline Result cmd_selfcert(const Config& cfg, bool emit) {
  const auto cert = certs::builtin_base2_certificate(cfg.emax);
  if (emit) return {certs::to_json(cert), kOk};
  return verification(cfg, cert);
}

inline Result scan_result(const search::ScanReport& rep, bool mismatch) {
  Result r{render::scan_report(rep), kOk, render::scan_csv(rep)};
  if (mismatch) {
    r.code = kRefuted;
  } else if (!rep.inconclusive.empty()) {
    r.code = kInconclusive;
  }
  return r;
}

inline Result cmd_scan_pow(const Config& cfg, std::uint64_t a_min, std::uint64_t a_max,
                           std::uint64_t n_min, std::uint64_t n_max) {
  const auto rep = search::scan_power_plus_one(a_min, a_max, n_min, n_max,
                                               cfg.cap_or(search::kDefaultScanBitCap), cfg.budget(), cfg.jobs);
  bool odd = false;
  for (const auto& f : rep.findings) odd = odd || !f.even();
  Result r = scan_result(rep, odd);
  r.doc["odd_findings"] = odd;
  return r;
}

inline Result cmd_scan_selfpow(const Config& cfg, std::uint64_t n_max) {
  const auto rep = search::scan_self_power(n_max, cfg.cap_or(search::kDefaultScanBitCap), cfg.budget(), cfg.jobs);
  bool mismatch = false;
  for (const auto& f : rep.findings) mismatch = mismatch || f.n != 3;
  Result r = scan_result(rep, mismatch);
  r.doc["only_28"] = !mismatch;
  return r;
}

inline Result cmd_census(const Config& cfg, const std::string& a_arg, unsigned U, std::uint64_t d_max) {
  const Natural a = arg_natural(a_arg, "--a");
  if (a < 2) throw UsageError("--a must be >= 2");
  const auto rows = search::primitive_prime_census(a, U, d_max, cfg.budget(), cfg.jobs);
  Result r{render::census(a, U, rows)};
  std::string csv = "d,count,k0,ok\n";
  bool open = false;
  for (const auto& row : rows) {
    csv += std::to_string(row.d) + "," + std::to_string(row.primes.size()) + "," + std::to_string(row.k0) +
           "," + (row.ok ? "true" : "false") + "\n";
    if (row.inconclusive) {
      open = true;
    } else if (!row.ok) {
      r.code = kRefuted;
    }
  }
  if (r.code == kOk && open) r.code = kInconclusive;
  r.csv = csv;
  return r;
}

inline Result cmd_sweep(unsigned U_min, unsigned U_max, unsigned m) {
  if (U_min < 4) throw UsageError("--U-min must be >= 4");
  if (U_max < U_min) throw UsageError("--U-max must be >= --U-min");
  const auto rows = bounds::base2_exclusion_sweep(U_min, U_max, m);
  Json arr = Json::array();
  std::string csv = "U,r0_upper,rhs_eq2,threshold,excluded\n";
  bool all = true;
  for (const auto& row : rows) {
    arr.push_back({{"U", row.U}, {"r0_upper", row.r0_upper}, {"rhs_eq2", row.rhs_eq2},
                   {"threshold", row.threshold}, {"excluded", row.excluded}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%u,%.10g,%.10g,%.10g,%s\n", row.U, row.r0_upper, row.rhs_eq2,
                  row.threshold, row.excluded ? "true" : "false");
    csv += buf;
    all = all && row.excluded;
  }
  return {Json{{"a", "2"}, {"m", m}, {"rows", arr}, {"all_excluded", all}}, all ? kOk : kRefuted, csv};
}

inline Result cmd_nn(const Config& cfg, const std::string& n_arg) {
  const std::uint64_t n = arg_u64(n_arg, "N");
  if (n < 2 || n % 2 != 0 || (n & (~n + 1)) == n) {
    throw UsageError("N must be even with an odd part > 1");
  }
  const auto red = search::nn_reduction(n, cfg.budget(), cfg.cap_or(search::kDefaultReductionBitCap));
  if (const auto* bad = std::get_if<Inconclusive>(&red)) {
    return {Json{{"n", n}, {"reason", bad->reason}}, kInconclusive};
  }
  const auto& r = std::get<search::NnReduction>(red);
  return {render::nn(r), r.ok() ? kOk : kRefuted};
}

inline void usage_error(std::ostream& err, const std::string& kind, const std::string& message,
                        const std::string& path = {}) {
  Json j{{"error", kind}, {"message", message}};
  if (!path.empty()) j["path"] = path;
  err << j.dump() << "\n";
}

}  // namespace detail

inline void emit(const Result& r, const Config& cfg, std::ostream& out) {
  if (cfg.format == "csv") {
    if (!r.csv) throw UsageError("csv output is not available for this subcommand");
    out << *r.csv;
    return;
  }
  Json doc = r.doc;
  render::round_reals(doc, cfg.precision);
  if (cfg.format == "text") {
    if (r.text) {
      out << *r.text;
    } else {
      std::string s;
      render::text_lines(doc, s);
      out << s;
    }
    return;
  }
  out << doc.dump(2) << "\n";
}

// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"apnkit: factor chains, bounds and certificates for a^n+1", "apnkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--format", cfg.format, "json | text | csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--precision", cfg.precision, "significant digits for reals")->check(CLI::Range(1, 17));
  app.add_option("--jobs", cfg.jobs, "worker threads; output order is fixed")->check(CLI::Range(1u, 256u));
  app.add_flag("--timing", cfg.timing, "include per-claim timings in verification output");
  app.add_option("--budget", cfg.budget_text, "trial=N,rho=N,ops=N (overrides " + std::string(kBudgetEnv) + ")");
  app.add_option("--trial", cfg.trial, "trial division limit");
  app.add_option("--rho", cfg.rho, "cycle-finding step limit per attempt");
  app.add_option("--ops", cfg.ops, "overall modular multiplication cap");
  app.add_option("--bit-cap", cfg.bit_cap, "value size cap in bits (0 = subcommand default)");
  app.add_option("--emax", cfg.emax, "largest family exponent in the builtin certificate")
      ->check(CLI::Range(4u, 64u));

  std::string s1, s2;
  auto* factor_cmd = app.add_subcommand("factor", "factor N");
  factor_cmd->add_option("N", s1)->required();
  auto* sigma_cmd = app.add_subcommand("sigma", "sigma(N), abundancy and multiperfect class");
  sigma_cmd->add_option("N", s1)->required();
  auto* order_cmd = app.add_subcommand("order", "multiplicative order of A mod prime P");
  order_cmd->add_option("A", s1)->required();
  order_cmd->add_option("P", s2)->required();
  auto* chain_cmd = app.add_subcommand("chain", "factor chain of A^N+1");
  chain_cmd->add_option("A", s1)->required();
  chain_cmd->add_option("N", s2)->required();

  std::string a_opt = "2";
  unsigned U = 0, m = 0;
  std::string variant = "default";
  auto* bound_cmd = app.add_subcommand("bound", "bound report for a^(2^U s)+1");
  bound_cmd->add_option("--a", a_opt)->required();
  bound_cmd->add_option("--U", U)->required();
  bound_cmd->add_option("--m", m);
  bound_cmd->add_option("--variant", variant, "default | odd | all")
      ->check(CLI::IsMember({"default", "odd", "all"}));

  std::optional<unsigned> const_U;
  auto* const_cmd = app.add_subcommand("constants", "c, C(U) variants, s0/t0");
  const_cmd->add_option("--U", const_U);
  const_cmd->add_option("--a", a_opt);

  auto* verify_cmd = app.add_subcommand("verify", "verify a certificate file");
  verify_cmd->add_option("CERT_FILE", s1)->required();

  bool emit_cert = false;
  auto* self_cmd = app.add_subcommand("selfcert", "verify the builtin base-2 certificate");
  self_cmd->add_flag("--emit", emit_cert, "print the certificate instead of verifying it");

  std::uint64_t a_min = 2, a_max = 10, n_min = 1, n_max = 20;
  auto* scan_cmd = app.add_subcommand("scan", "exhaustive scans");
  scan_cmd->require_subcommand(1);
  auto* pow_cmd = scan_cmd->add_subcommand("pow", "a^n+1 over a rectangle");
  pow_cmd->add_option("--a-min", a_min);
  pow_cmd->add_option("--a-max", a_max);
  pow_cmd->add_option("--n-min", n_min);
  pow_cmd->add_option("--n-max", n_max);
  auto* selfpow_cmd = scan_cmd->add_subcommand("selfpow", "n^n+1 for n <= n-max");
  selfpow_cmd->add_option("--n-max", n_max)->required();

  std::uint64_t d_max = 9;
  auto* census_cmd = app.add_subcommand("census", "primes of order 2^(U+1) d against k0(d)");
  census_cmd->add_option("--a", a_opt)->required();
  census_cmd->add_option("--U", U)->required();
  census_cmd->add_option("--d-max", d_max)->required();

  unsigned U_min = 4, U_max = 64;
  auto* sweep_cmd = app.add_subcommand("sweep", "base-2 exclusion sweep over U");
  sweep_cmd->add_option("--U-min", U_min);
  sweep_cmd->add_option("--U-max", U_max);
  sweep_cmd->add_option("--m", m);

  auto* nn_cmd = app.add_subcommand("nn", "coprime split of n^n+1 for even n");
  nn_cmd->add_option("N", s1)->required();

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();
  pow_cmd->fallthrough();
  selfpow_cmd->fallthrough();

  std::vector<std::string> argv_store{"apnkit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    detail::usage_error(err, "usage", e.what());
    return kUsage;
  }

  try {
    Result r;
    if (*factor_cmd) {
      r = detail::cmd_factor(cfg, s1);
    } else if (*sigma_cmd) {
      r = detail::cmd_sigma(cfg, s1);
    } else if (*order_cmd) {
      r = detail::cmd_order(cfg, s1, s2);
    } else if (*chain_cmd) {
      r = detail::cmd_chain(cfg, s1, s2);
    } else if (*bound_cmd) {
      r = detail::cmd_bound(a_opt, U, m, variant);
    } else if (*const_cmd) {
      r = detail::cmd_constants(const_U, a_opt);
    } else if (*verify_cmd) {
      r = detail::cmd_verify(cfg, s1);
    } else if (*self_cmd) {
      r = detail::cmd_selfcert(cfg, emit_cert);
    } else if (*pow_cmd) {
      r = detail::cmd_scan_pow(cfg, a_min, a_max, n_min, n_max);
    } else if (*selfpow_cmd) {
      r = detail::cmd_scan_selfpow(cfg, n_max);
    } else if (*census_cmd) {
      r = detail::cmd_census(cfg, a_opt, U, d_max);
    } else if (*sweep_cmd) {
      r = detail::cmd_sweep(U_min, U_max, m);
    } else if (*nn_cmd) {
      r = detail::cmd_nn(cfg, s1);
    } else {
      throw UsageError("no subcommand");
    }
    emit(r, cfg, out);
    return r.code;
  } catch (const certs::SchemaError& e) {
    detail::usage_error(err, "schema", e.what(), e.path());
    return kUsage;
  } catch (const UsageError& e) {
    detail::usage_error(err, "usage", e.what());
    return kUsage;
  } catch (const ChainTooLarge& e) {
    detail::usage_error(err, "over-cap", e.what());
    return kInconclusive;
  } catch (const std::invalid_argument& e) {
    detail::usage_error(err, "invalid-input", e.what());
    return kUsage;
  } catch (const std::out_of_range& e) {
    detail::usage_error(err, "invalid-input", e.what());
    return kUsage;
  } catch (const std::runtime_error& e) {
    detail::usage_error(err, "io", e.what());
    return kUsage;
  }
}

}  // namespace apnkit::cli
