#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace apnkit {

enum class Outcome {
  kProven,
  kRefuted,
  kInconclusive,
  kRecorded,  // axioms: logged, never checked
};

inline std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kProven: return "Proven";
    case Outcome::kRefuted: return "Refuted";
    case Outcome::kInconclusive: return "Inconclusive";
    case Outcome::kRecorded: return "Recorded";
  }
  return "?";
}

struct Verdict {
  Outcome outcome = Outcome::kInconclusive;
  std::string reason;

  static Verdict proven(std::string why = {}) { return {Outcome::kProven, std::move(why)}; }
  static Verdict refuted(std::string why) { return {Outcome::kRefuted, std::move(why)}; }
  static Verdict inconclusive(std::string why) {
    return {Outcome::kInconclusive, std::move(why)};
  }
  static Verdict recorded() { return {Outcome::kRecorded, "axiom, not machine-checked"}; }

  bool is_proven() const { return outcome == Outcome::kProven; }
  bool is_refuted() const { return outcome == Outcome::kRefuted; }
  bool is_inconclusive() const { return outcome == Outcome::kInconclusive; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Marker for a computation that ran out of budget. Carries a human-readable
// reason; callers that need partial results get them through richer types
// (see FactorResult).
struct Inconclusive {
  std::string reason;
};

template <class T>
using OrInconclusive = std::variant<T, Inconclusive>;

template <class T>
const T* value_if(const OrInconclusive<T>& v) {
  return std::get_if<T>(&v);
}

// Budget for one factoring job. "Operations" are modular multiplications
// performed by the cycle-finding stage; trial division is governed only by
// trial_limit.
struct FactorBudget {
  std::uint64_t trial_limit = 1'000'000;
  std::uint64_t rho_iterations = 1u << 22;
  std::uint64_t overall_op_cap = 1u << 26;

  void validate() const {
    if (trial_limit == 0 || rho_iterations == 0 || overall_op_cap == 0) {
      throw std::invalid_argument("factor budget fields must be positive");
    }
  }

  friend bool operator==(const FactorBudget&, const FactorBudget&) = default;
};

// Parses "trial=N,rho=N,ops=N" (any subset, any order) on top of `base`.
inline FactorBudget parse_budget(std::string_view text, FactorBudget base = {}) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("budget item without '=': " + std::string(item));
    }
    const auto key = item.substr(0, eq);
    const std::string val(item.substr(eq + 1));
    std::uint64_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoull(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad budget value: " + std::string(item));
    }
    if (key == "trial") {
      base.trial_limit = v;
    } else if (key == "rho") {
      base.rho_iterations = v;
    } else if (key == "ops") {
      base.overall_op_cap = v;
    } else {
      throw std::invalid_argument("unknown budget key: " + std::string(key));
    }
  }
  base.validate();
  return base;
}

}  // namespace apnkit
