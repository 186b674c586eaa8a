#pragma once

// JSON encoding of certificates and verification reports. Exact quantities
// (integers, rationals) are decimal strings; unknown fields are rejected.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "apnkit/certs.hpp"

namespace apnkit::certs {

namespace io_detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const Json& field(const Json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string text(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_string()) throw SchemaError(child(path, key), "expected a string");
  return v.get<std::string>();
}

inline Natural natural(const Json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a decimal string");
  try {
    return parse_natural(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

inline Natural natural(const Json& obj, const std::string& path, const char* key) {
  return natural(field(obj, path, key), child(path, key));
}

inline Rational rational(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_string()) throw SchemaError(child(path, key), "expected a rational string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(child(path, key), e.what());
  }
}

inline std::vector<Natural> naturals(const Json& obj, const std::string& path, const char* key) {
  const Json& arr = field(obj, path, key);
  const std::string here = child(path, key);
  if (!arr.is_array()) throw SchemaError(here, "expected an array");
  std::vector<Natural> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(natural(arr[i], child(here, i)));
  return out;
}

inline std::vector<PrimePower> factors(const Json& obj, const std::string& path) {
  const Json& arr = field(obj, path, "factors");
  const std::string here = child(path, "factors");
  if (!arr.is_array()) throw SchemaError(here, "expected an array");
  std::vector<PrimePower> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = child(here, i);
    if (!arr[i].is_object()) throw SchemaError(at, "expected an object");
    const Natural e = natural(arr[i], at, "e");
    if (e < 1 || !mpz_fits_uint_p(e.get_mpz_t())) throw SchemaError(child(at, "e"), "exponent out of range");
    out.push_back({natural(arr[i], at, "p"), static_cast<unsigned>(e.get_ui())});
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i - 1].prime < out[i].prime)) throw SchemaError(here, "primes must be strictly increasing");
  }
  return out;
}

inline void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw SchemaError(child(path, it.key()), "unknown field");
  }
}

inline Json strings(const std::vector<Natural>& v) {
  Json arr = Json::array();
  for (const auto& x : v) arr.push_back(to_decimal(x));
  return arr;
}

struct BodyWriter {
  Json& out;
  void operator()(const FactorizationClaim& c) const {
    out["a"] = to_decimal(c.a);
    out["n"] = to_decimal(c.n);
    out["factors"] = detail::factors_json(c.factors);
  }
  void operator()(const ExactOnceClaim& c) const {
    out["a"] = to_decimal(c.a);
    out["n_description"] = c.n_description;
    out["p"] = to_decimal(c.p);
    out["instances"] = strings(c.instances);
  }
  void operator()(const TwoExactOnceRefutation& c) const {
    out["a"] = to_decimal(c.a);
    out["n"] = to_decimal(c.n);
    out["p"] = to_decimal(c.p);
    out["q"] = to_decimal(c.q);
  }
  void operator()(const OrderClaim& c) const {
    out["a"] = to_decimal(c.a);
    out["p"] = to_decimal(c.p);
    out["k"] = to_decimal(c.k);
  }
  void operator()(const PrimeClaim& c) const { out["p"] = to_decimal(c.p); }
  void operator()(const AbundancyCapClaim& c) const {
    out["a"] = to_decimal(c.a);
    out["n"] = to_decimal(c.n);
    out["factors"] = detail::factors_json(c.factors);
    out["log_term"] = to_string(c.log_term);
    out["cap"] = to_string(c.cap);
  }
  void operator()(const TailSumCapClaim& c) const {
    out["p"] = to_decimal(c.p);
    out["cap"] = to_string(c.cap);
  }
  void operator()(const NotMultiperfectClaim& c) const {
    out["a"] = to_decimal(c.a);
    out["n"] = to_decimal(c.n);
    out["classes"] = strings(c.classes);
    if (c.sigma) out["sigma"] = to_decimal(*c.sigma);
  }
  void operator()(const AxiomClaim& c) const {
    out["name"] = c.name;
    out["statement"] = c.statement;
  }
};

inline ClaimBody parse_body(const Json& j, const std::string& path, const std::string& kind) {
  const auto& p = path;
  if (kind == "factorization") {
    only_keys(j, p, {"id", "kind", "note", "a", "n", "factors"});
    return FactorizationClaim{natural(j, p, "a"), natural(j, p, "n"), factors(j, p)};
  }
  if (kind == "exact_once") {
    only_keys(j, p, {"id", "kind", "note", "a", "n_description", "p", "instances"});
    return ExactOnceClaim{natural(j, p, "a"), text(j, p, "n_description"), natural(j, p, "p"),
                          naturals(j, p, "instances")};
  }
  if (kind == "two_exact_once_refutation") {
    only_keys(j, p, {"id", "kind", "note", "a", "n", "p", "q"});
    return TwoExactOnceRefutation{natural(j, p, "a"), natural(j, p, "n"), natural(j, p, "p"),
                                  natural(j, p, "q")};
  }
  if (kind == "order") {
    only_keys(j, p, {"id", "kind", "note", "a", "p", "k"});
    return OrderClaim{natural(j, p, "a"), natural(j, p, "p"), natural(j, p, "k")};
  }
  if (kind == "prime") {
    only_keys(j, p, {"id", "kind", "note", "p"});
    return PrimeClaim{natural(j, p, "p")};
  }
  if (kind == "abundancy_cap") {
    only_keys(j, p, {"id", "kind", "note", "a", "n", "factors", "log_term", "cap"});
    return AbundancyCapClaim{natural(j, p, "a"), natural(j, p, "n"), factors(j, p),
                             rational(j, p, "log_term"), rational(j, p, "cap")};
  }
  if (kind == "tail_sum_cap") {
    only_keys(j, p, {"id", "kind", "note", "p", "cap"});
    return TailSumCapClaim{natural(j, p, "p"), rational(j, p, "cap")};
  }
  if (kind == "not_multiperfect") {
    only_keys(j, p, {"id", "kind", "note", "a", "n", "classes", "sigma"});
    NotMultiperfectClaim c{natural(j, p, "a"), natural(j, p, "n"), naturals(j, p, "classes"), {}};
    if (j.contains("sigma")) c.sigma = natural(j, p, "sigma");
    return c;
  }
  if (kind == "axiom") {
    only_keys(j, p, {"id", "kind", "note", "name", "statement"});
    return AxiomClaim{text(j, p, "name"), text(j, p, "statement")};
  }
  throw SchemaError(child(path, "kind"), "unknown claim kind '" + kind + "'");
}

}  // namespace io_detail

inline Json to_json(const Claim& c) {
  Json j;
  j["id"] = c.id;
  j["kind"] = claim_kind(c.body);
  std::visit(io_detail::BodyWriter{j}, c.body);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Json to_json(const Certificate& cert) {
  Json j;
  j["schema_version"] = cert.schema_version;
  j["title"] = cert.title;
  Json claims = Json::array();
  for (const auto& c : cert.claims) claims.push_back(to_json(c));
  j["claims"] = std::move(claims);
  j["notes"] = cert.notes;
  return j;
}

inline Claim claim_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  Claim c;
  c.id = io_detail::text(j, path, "id");
  const std::string kind = io_detail::text(j, path, "kind");
  c.body = io_detail::parse_body(j, path, kind);
  if (j.contains("note")) c.note = io_detail::text(j, path, "note");
  return c;
}

// Parses and validates; throws SchemaError before any claim is verified.
inline Certificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("", "certificate must be a JSON object");
  io_detail::only_keys(j, "", {"schema_version", "title", "claims", "notes"});
  Certificate cert;
  const Json& version = io_detail::field(j, "", "schema_version");
  if (!version.is_number_integer()) throw SchemaError("/schema_version", "expected an integer");
  cert.schema_version = version.get<int>();
  cert.title = io_detail::text(j, "", "title");
  const Json& claims = io_detail::field(j, "", "claims");
  if (!claims.is_array()) throw SchemaError("/claims", "expected an array");
  for (std::size_t i = 0; i < claims.size(); ++i) {
    cert.claims.push_back(claim_from_json(claims[i], "/claims/" + std::to_string(i)));
  }
  if (j.contains("notes")) {
    const Json& notes = j["notes"];
    if (!notes.is_array()) throw SchemaError("/notes", "expected an array");
    for (std::size_t i = 0; i < notes.size(); ++i) {
      if (!notes[i].is_string()) throw SchemaError("/notes/" + std::to_string(i), "expected a string");
      cert.notes.push_back(notes[i].get<std::string>());
    }
  }
  validate(cert);
  return cert;
}

inline Certificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

inline Certificate load_certificate(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + filename);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_certificate(buf.str());
}

inline Json to_json(const ClaimResult& r, bool timing) {
  Json j;
  j["id"] = r.id;
  j["kind"] = r.kind;
  j["verdict"] = outcome_name(r.verdict.outcome);
  j["reason"] = r.verdict.reason;
  j["witness"] = r.witness;
  if (timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline Json to_json(const VerificationResult& v, bool timing = false) {
  Json j;
  j["overall"] = outcome_name(v.overall);
  j["counts"] = {{"proven", v.count(Outcome::kProven)},
                 {"refuted", v.count(Outcome::kRefuted)},
                 {"inconclusive", v.count(Outcome::kInconclusive)},
                 {"recorded", v.count(Outcome::kRecorded)}};
  Json claims = Json::array();
  for (const auto& c : v.claims) claims.push_back(to_json(c, timing));
  j["claims"] = std::move(claims);
  return j;
}

}  // namespace apnkit::certs
