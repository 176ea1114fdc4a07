#pragma once
#include "vlwe/errors.hpp"

#include <cstdint>
#include <cstdlib>

// Single-limb modular arithmetic for moduli up to 62 bits.
// Unsigned residues in [0, q) are the storage form; centered
// representatives in (-q/2, q/2] are used for rounding and norms.
namespace vlwe {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kMaxModulusBits = 62;

inline u64 add_mod(u64 a, u64 b, u64 q) {
  u64 r = a + b; // no overflow: a, b < q <= 2^62
  return r >= q ? r - q : r;
}

inline u64 sub_mod(u64 a, u64 b, u64 q) {
  return a >= b ? a - b : a + q - b;
}

inline u64 neg_mod(u64 a, u64 q) {
  return a == 0 ? 0 : q - a;
}

inline u64 mul_mod(u64 a, u64 b, u64 q) {
  return static_cast<u64>(static_cast<u128>(a) * b % q);
}

inline u64 pow_mod(u64 base, u64 exp, u64 q) {
  u64 r = 1 % q;
  base %= q;
  while (exp != 0) {
    if (exp & 1) r = mul_mod(r, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return r;
}

// Inverse via extended gcd; throws when gcd(a, q) != 1.
inline u64 inv_mod(u64 a, u64 q) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(q), new_r = static_cast<i64>(a % q);
  while (new_r != 0) {
    i64 quot = r / new_r;
    i64 tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw DomainError("inv_mod: argument not invertible");
  if (t < 0) t += static_cast<i64>(q);
  return static_cast<u64>(t);
}

// Centered representative in (-q/2, q/2].
inline i64 center(u64 v, u64 q) {
  return v > q / 2 ? static_cast<i64>(v) - static_cast<i64>(q)
                   : static_cast<i64>(v);
}

inline u64 from_centered(i64 x, u64 q) {
  i64 r = x % static_cast<i64>(q);
  if (r < 0) r += static_cast<i64>(q);
  return static_cast<u64>(r);
}

// round(c * q_to / q_from) on the centered representative of c,
// ties away from zero; result reduced into [0, q_to).
inline u64 scale_round_coeff(u64 c, u64 q_from, u64 q_to) {
  i128 num = static_cast<i128>(center(c, q_from)) * static_cast<i128>(q_to);
  i128 den = static_cast<i128>(q_from);
  i128 r = (2 * num + (num < 0 ? -den : den)) / (2 * den);
  return from_centered(static_cast<i64>(r), q_to);
}

inline bool is_power_of_two(u64 v) { return v != 0 && (v & (v - 1)) == 0; }

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Smallest prime q >= floor_value with q == 1 (mod 2d).
inline u64 find_ntt_prime(std::size_t d, u64 floor_value) {
  const u64 step = 2 * static_cast<u64>(d);
  u64 k = floor_value <= 1 ? 1 : (floor_value - 2 + step) / step;
  for (;; ++k) {
    u64 cand = step * k + 1;
    if (cand >= (1ull << kMaxModulusBits))
      throw DomainError("find_ntt_prime: no prime within the 62-bit limit");
    if (is_prime_u64(cand)) return cand;
  }
}

} // namespace vlwe
