#pragma once

// The shipped bundle for a = 2: every numeric leaf of the case analysis
// showing 2^n + 1 is never (4m+2)-perfect.

#include <string>
#include <vector>

#include "apnkit/certs.hpp"

namespace apnkit::certs {

inline constexpr unsigned kDefaultEmax = 8;

namespace builtin_detail {

inline std::vector<Natural> family(const Natural& head, const Natural& base, unsigned e_min,
                                   unsigned e_max) {
  std::vector<Natural> out;
  for (unsigned e = e_min; e <= e_max; ++e) out.push_back(head * power(base, e));
  return out;
}

inline std::vector<PrimePower> pp(std::initializer_list<std::pair<unsigned long, unsigned>> list) {
  std::vector<PrimePower> out;
  for (const auto& [p, e] : list) out.push_back({Natural(p), e});
  return out;
}

}  // namespace builtin_detail

inline Certificate builtin_base2_certificate(unsigned e_max = kDefaultEmax) {
  using builtin_detail::family;
  using builtin_detail::pp;
  if (e_max < 4) throw std::invalid_argument("builtin certificate needs E_max >= 4");

  Certificate cert;
  cert.title = "2^n + 1 is never (4m+2)-perfect: numeric leaves";
  const Natural two = 2;
  auto add = [&](std::string id, ClaimBody body, std::string note = {}) {
    cert.claims.push_back({std::move(id), std::move(body), std::move(note)});
  };

  for (unsigned long p : {3ul, 5ul, 17ul, 257ul}) {
    add("prime-fermat-" + std::to_string(p), PrimeClaim{p}, "2^(2^U)+1 for U <= 3");
  }
  for (unsigned long p : {19ul, 41ul, 101ul, 163ul, 571ul, 821ul, 8101ul, 10169ul, 87211ul, 174763ul}) {
    add("prime-" + std::to_string(p), PrimeClaim{p});
  }

  add("factor-2^10+1", FactorizationClaim{two, 10, pp({{5, 2}, {41, 1}})});
  add("factor-2^15+1", FactorizationClaim{two, 15, pp({{3, 2}, {11, 1}, {331, 1}})});
  add("factor-2^21+1", FactorizationClaim{two, 21, pp({{3, 2}, {43, 1}, {5419, 1}})});
  add("factor-2^27+1", FactorizationClaim{two, 27, pp({{3, 4}, {19, 1}, {87211, 1}})});
  add("factor-2^50+1",
      FactorizationClaim{two, 50, pp({{5, 3}, {41, 1}, {101, 1}, {8101, 1}, {268501, 1}})});

  add("two-once-27", TwoExactOnceRefutation{two, 27, 19, 87211}, "n = 3^3");
  add("two-once-50", TwoExactOnceRefutation{two, 50, 41, 101}, "n = 2*5^2");
  add("two-once-171", TwoExactOnceRefutation{two, 171, 571, 174763}, "n = 9*19");
  add("two-once-410", TwoExactOnceRefutation{two, 410, 821, 10169}, "n = 10*41");
  add("two-once-513", TwoExactOnceRefutation{two, 513, 571, 87211}, "n = 27*19");
  add("exact-once-2^50+1-8101", ExactOnceClaim{two, "2*5^2", 8101, {Natural(50)}});

  const std::pair<unsigned long, unsigned long> orders[] = {
      {19, 18},     {41, 20},      {101, 100},   {163, 162},   {571, 114},
      {821, 820},   {8101, 100},   {10169, 164}, {87211, 54},  {174763, 38}};
  for (const auto& [p, k] : orders) {
    add("order-2-mod-" + std::to_string(p), OrderClaim{two, p, k});
  }

  struct Family {
    const char* tag;
    unsigned long head;
    unsigned long base;
    unsigned e_min;
    std::vector<unsigned long> primes;
  };
  const Family families[] = {
      {"3^e", 1, 3, 3, {19, 87211}},
      {"3^e", 1, 3, 4, {163}},
      {"2*5^e", 2, 5, 2, {41, 101, 8101}},
      {"4*17^e", 4, 17, 1, {354689, 2879347902817ul}},
      {"27*19^e", 27, 19, 1, {571, 87211}},
      {"9*19^e", 9, 19, 1, {571, 174763}},
      {"3*5^e", 3, 5, 1, {11, 331}},
      {"3*7^e", 3, 7, 1, {43, 5419}},
  };
  for (const auto& f : families) {
    for (unsigned long p : f.primes) {
      const std::string desc = std::string(f.tag) + ", e = " + std::to_string(f.e_min) + ".." +
                               std::to_string(e_max);
      add("exact-once-" + std::string(f.tag) + "-" + std::to_string(p),
          ExactOnceClaim{two, desc, p, family(f.head, f.base, f.e_min, e_max)},
          "finite prefix of an infinite family; the general case rests on the order argument");
    }
  }

  add("cap-2^27+1", AbundancyCapClaim{two, 27, pp({{3, 4}, {19, 1}, {87211, 1}}), Rational(1, 9000), 2},
      "n = 27*87211^e");
  add("cap-2^3+1", AbundancyCapClaim{two, 3, pp({{3, 2}}), Rational(6, 25), 2}, "n = 3*p, p >= 11");
  add("tail-87211", TailSumCapClaim{87211, Rational(1, 9000)});
  add("tail-11", TailSumCapClaim{11, Rational(6, 25)}, "smallest p in the p >= 11 family");

  const std::vector<Natural> classes = {2, 6, 10, 14};
  add("not-multiperfect-2^3+1", NotMultiperfectClaim{two, 3, classes, Natural(13)});
  add("not-multiperfect-2^9+1", NotMultiperfectClaim{two, 9, classes, Natural(800)});
  add("not-multiperfect-2^10+1", NotMultiperfectClaim{two, 10, classes, Natural(1302)});

  add("axiom-euler", AxiomClaim{"Euler form",
                                "an odd (4m+2)-perfect number has the form p x^2 with p prime"});
  add("axiom-ljunggren", AxiomClaim{"Ljunggren",
                                    "(a^f+1)/(a+1) is never a square for a >= 2 and odd f >= 3"});
  add("axiom-sinha", AxiomClaim{"Sinha", "28 is the only even perfect number of the form a^n+1"});

  cert.notes = {
      "Family claims are checked on e up to E_max = " + std::to_string(e_max) + " only.",
      "Axioms are recorded, not verified.",
  };
  return cert;
}

}  // namespace apnkit::certs
