#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vlwe {

// Negacyclic number-theoretic transform over Z_q[x]/(x^d + 1),
// d a power of two, q odd with a primitive 2d-th root of unity.
// Forward pass is Cooley-Tukey with the psi twist merged into the
// twiddle factors, inverse is Gentleman-Sande; tables hold psi powers in
// bit-reversed order together with Shoup constants so the butterfly
// multiplications avoid 128-bit division.
class NttTables {
public:
  static std::optional<NttTables> try_build(std::size_t d, u64 q) {
    if (!is_power_of_two(static_cast<u64>(d))) return std::nullopt;
    if (q < 3 || (q & 1) == 0) return std::nullopt;
    const u64 two_d = 2 * static_cast<u64>(d);
    if ((q - 1) % two_d != 0) return std::nullopt;
    u64 psi = 0;
    for (u64 g = 2; g < 2000 && g < q; ++g) {
      u64 cand = pow_mod(g, (q - 1) / two_d, q);
      if (cand != 0 && pow_mod(cand, static_cast<u64>(d), q) == q - 1) {
        psi = cand;
        break;
      }
    }
    if (psi == 0) return std::nullopt;
    return NttTables(d, q, psi);
  }

  static NttTables build(std::size_t d, u64 q) {
    auto t = try_build(d, q);
    if (!t)
      throw CapabilityError(
          "ntt: modulus has no primitive 2d-th root of unity for d = " +
          std::to_string(d));
    return *std::move(t);
  }

  std::size_t degree() const { return d_; }
  u64 modulus() const { return q_; }

  void forward(std::span<u64> a) const {
    std::size_t t = d_;
    for (std::size_t m = 1; m < d_; m <<= 1) {
      t >>= 1;
      for (std::size_t i = 0; i < m; ++i) {
        const u64 w = psi_rev_[m + i];
        const u64 ws = psi_rev_shoup_[m + i];
        const std::size_t j1 = 2 * i * t;
        for (std::size_t j = j1; j < j1 + t; ++j) {
          const u64 u = a[j];
          const u64 v = mul_shoup(a[j + t], w, ws);
          a[j] = add_mod(u, v, q_);
          a[j + t] = sub_mod(u, v, q_);
        }
      }
    }
  }

  void inverse(std::span<u64> a) const {
    std::size_t t = 1;
    for (std::size_t m = d_; m > 1; m >>= 1) {
      std::size_t j1 = 0;
      const std::size_t h = m >> 1;
      for (std::size_t i = 0; i < h; ++i) {
        const u64 w = psi_inv_rev_[h + i];
        const u64 ws = psi_inv_rev_shoup_[h + i];
        for (std::size_t j = j1; j < j1 + t; ++j) {
          const u64 u = a[j];
          const u64 v = a[j + t];
          a[j] = add_mod(u, v, q_);
          a[j + t] = mul_shoup(sub_mod(u, v, q_), w, ws);
        }
        j1 += 2 * t;
      }
      t <<= 1;
    }
    for (std::size_t j = 0; j < d_; ++j)
      a[j] = mul_shoup(a[j], d_inv_, d_inv_shoup_);
  }

  // c = a * b mod (x^d + 1, q)
  std::vector<u64> negacyclic_mul(std::span<const u64> a,
                                  std::span<const u64> b) const {
    std::vector<u64> fa(a.begin(), a.end());
    std::vector<u64> fb(b.begin(), b.end());
    forward(fa);
    forward(fb);
    for (std::size_t i = 0; i < d_; ++i) fa[i] = mul_mod(fa[i], fb[i], q_);
    inverse(fa);
    return fa;
  }

private:
  NttTables(std::size_t d, u64 q, u64 psi)
      : d_(d), q_(q), psi_rev_(d), psi_rev_shoup_(d), psi_inv_rev_(d),
        psi_inv_rev_shoup_(d), d_inv_(inv_mod(static_cast<u64>(d), q)),
        d_inv_shoup_(shoup_constant(d_inv_, q)) {
    const u64 psi_inv = inv_mod(psi, q);
    int logd = 0;
    while ((std::size_t(1) << logd) < d) ++logd;
    u64 p = 1, pi = 1;
    for (std::size_t i = 0; i < d_; ++i) {
      const std::size_t r = bit_reverse(i, logd);
      psi_rev_[r] = p;
      psi_rev_shoup_[r] = shoup_constant(p, q);
      psi_inv_rev_[r] = pi;
      psi_inv_rev_shoup_[r] = shoup_constant(pi, q);
      p = mul_mod(p, psi, q);
      pi = mul_mod(pi, psi_inv, q);
    }
  }

  static u64 shoup_constant(u64 w, u64 q) {
    return static_cast<u64>((static_cast<u128>(w) << 64) / q);
  }

  // x * w mod q with ws = floor(w * 2^64 / q); one high multiply and a
  // conditional subtraction instead of a 128-bit division.
  u64 mul_shoup(u64 x, u64 w, u64 ws) const {
    const u64 hi = static_cast<u64>((static_cast<u128>(x) * ws) >> 64);
    const u64 r = x * w - hi * q_;
    return r >= q_ ? r - q_ : r;
  }

  static std::size_t bit_reverse(std::size_t v, int bits) {
    std::size_t r = 0;
    for (int i = 0; i < bits; ++i) {
      r = (r << 1) | (v & 1);
      v >>= 1;
    }
    return r;
  }

  std::size_t d_;
  u64 q_;
  std::vector<u64> psi_rev_;
  std::vector<u64> psi_rev_shoup_;
  std::vector<u64> psi_inv_rev_;
  std::vector<u64> psi_inv_rev_shoup_;
  u64 d_inv_;
  u64 d_inv_shoup_;
};

} // namespace vlwe
