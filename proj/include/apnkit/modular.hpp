#pragma once

// 64-bit modular arithmetic: plain __int128 helpers and a Montgomery form
// used by the cycle-finding factoring kernel.

#include <cstdint>

namespace apnkit::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod_u64(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Montgomery arithmetic modulo an odd n < 2^63 (so a+b never overflows).
class Montgomery {
 public:
  explicit Montgomery(u64 n) : n_(n), inv_(inverse(n)), r2_(static_cast<u64>(-static_cast<u128>(n) % n)) {}

  u64 modulus() const { return n_; }

  u64 to(u64 x) const { return reduce(static_cast<u128>(x % n_) * r2_); }
  u64 from(u64 x) const { return reduce(x); }

  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= n_ ? s - n_ : s;
  }

 private:
  static u64 inverse(u64 n) {
    u64 x = n;  // correct to 3 bits for odd n
    for (int i = 0; i < 5; ++i) x *= 2 - n * x;
    return x;
  }

  u64 reduce(u128 t) const {
    const u64 m = static_cast<u64>(t) * inv_;
    const u64 mn_hi = static_cast<u64>((static_cast<u128>(m) * n_) >> 64);
    const u64 t_hi = static_cast<u64>(t >> 64);
    // t - m*n is divisible by 2^64; the low halves cancel exactly.
    const u64 r = t_hi - mn_hi;
    return t_hi < mn_hi ? r + n_ : r;
  }

  u64 n_;
  u64 inv_;
  u64 r2_;
};

}  // namespace apnkit::detail
