#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"
#include "vlwe/ntt.hpp"
#include "vlwe/sampler.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace vlwe {

// Two-element scheme over one negacyclic ring Z_q[x]/(x^d + 1): scale-up
// encoding Delta = floor(q/t), exact integer tensor product scaled by t/q
// for multiplication, base-2^w key switching back to two elements. Used
// per coordinate as the multiplicative reference path and standalone as
// the RLWE baseline. Noise is tracked as per-coefficient variance.
class NegacyclicBfv {
public:
  using Poly = std::vector<u64>;

  struct Ct {
    Poly c0, c1;
    double var = 0.0;
  };

  struct KsKey {
    std::vector<std::pair<Poly, Poly>> rows; // (beta_j, alpha_j)
  };

  NegacyclicBfv(std::size_t d, u64 q, u64 t, double sigma,
                unsigned ks_base_bits = 8)
      : d_(d), q_(q), t_(t), sigma_(sigma), base_bits_(ks_base_bits),
        tab_(NttTables::build(d, q)) {
    if (t < 2 || t >= q || q / t < 2)
      throw DomainError("negacyclic scheme: require 1 < t and floor(q/t) >= 2");
  }

  std::size_t degree() const { return d_; }
  u64 modulus() const { return q_; }
  u64 plain_modulus() const { return t_; }
  u64 delta() const { return q_ / t_; }
  const NttTables& tables() const { return tab_; }

  Poly zero() const { return Poly(d_, 0); }

  Poly add(const Poly& a, const Poly& b) const {
    Poly r(d_);
    for (std::size_t i = 0; i < d_; ++i) r[i] = add_mod(a[i], b[i], q_);
    return r;
  }

  Poly sub(const Poly& a, const Poly& b) const {
    Poly r(d_);
    for (std::size_t i = 0; i < d_; ++i) r[i] = sub_mod(a[i], b[i], q_);
    return r;
  }

  Poly mul(const Poly& a, const Poly& b) const {
    return tab_.negacyclic_mul(a, b);
  }

  Poly scale_coeffs(const Poly& a, u64 factor) const {
    Poly r(d_);
    for (std::size_t i = 0; i < d_; ++i) r[i] = mul_mod(a[i], factor % q_, q_);
    return r;
  }

  Poly gaussian(const DiscreteGaussian& dg, SamplerState& state) const {
    Poly r(d_);
    for (auto& c : r) c = from_centered(dg.sample(state), q_);
    return r;
  }

  Poly uniform(SamplerState& state) const {
    Poly r(d_);
    for (auto& c : r) c = state.uniform_below(q_);
    return r;
  }

  // Symmetric encryption: c0 = Delta*m + e - a*s, c1 = a, so that
  // c0 + c1*s = Delta*m + e.
  Ct enc_sym(const Poly& s, const Poly& msg, SamplerState& state) const {
    const DiscreteGaussian dg(sigma_);
    const Poly a = uniform(state);
    const Poly e = gaussian(dg, state);
    Ct ct;
    ct.c1 = a;
    ct.c0 = sub(add(scale_coeffs(msg, delta()), e), mul(a, s));
    ct.var = sigma_ * sigma_;
    return ct;
  }

  Poly dec_raw(const Poly& s, const Ct& ct) const {
    return add(ct.c0, mul(ct.c1, s));
  }

  Poly dec(const Poly& s, const Ct& ct) const {
    Poly w = dec_raw(s, ct);
    for (auto& c : w) c = scale_round_coeff(c, q_, t_);
    return w;
  }

  bool var_safe(double var) const {
    return 6.0 * std::sqrt(var) < static_cast<double>(delta()) / 2.0;
  }

  std::size_t ks_digits() const {
    const unsigned qbits = static_cast<unsigned>(std::bit_width(q_));
    return (qbits + base_bits_ - 1) / base_bits_;
  }

  // Rows encrypt T^j * s^2: beta_j = T^j s^2 + e_j - alpha_j s.
  KsKey ks_keygen(const Poly& s, SamplerState& state) const {
    const DiscreteGaussian dg(sigma_);
    const Poly s2 = mul(s, s);
    KsKey key;
    key.rows.reserve(ks_digits());
    for (std::size_t j = 0; j < ks_digits(); ++j) {
      const u64 factor = pow_mod(2, static_cast<u64>(j) * base_bits_, q_);
      const Poly alpha = uniform(state);
      const Poly e = gaussian(dg, state);
      const Poly beta = sub(add(scale_coeffs(s2, factor), e), mul(alpha, s));
      key.rows.emplace_back(beta, alpha);
    }
    return key;
  }

  Ct add_ct(const Ct& x, const Ct& y) const {
    return Ct{add(x.c0, y.c0), add(x.c1, y.c1), x.var + y.var};
  }

  // Tensor the two ciphertexts over the integers (centered lifts), scale
  // each component by t/q with rounding, then switch the s^2 component
  // back onto (1, s). Throws once the tracked variance exhausts the
  // noise budget.
  Ct mul_ct(const Ct& x, const Ct& y, const KsKey& ks) const {
    const auto x0 = centered(x.c0), x1 = centered(x.c1);
    const auto y0 = centered(y.c0), y1 = centered(y.c1);
    std::vector<i128> acc0(d_, 0), acc1(d_, 0), acc2(d_, 0);
    conv_acc(x0, y0, acc0);
    conv_acc(x0, y1, acc1);
    conv_acc(x1, y0, acc1);
    conv_acc(x1, y1, acc2);
    Poly t0 = scale_to_q(acc0), t1 = scale_to_q(acc1), t2 = scale_to_q(acc2);

    Ct out;
    out.c0 = std::move(t0);
    out.c1 = std::move(t1);
    const u64 mask = (base_bits_ >= 64) ? ~0ull : ((1ull << base_bits_) - 1);
    Poly digit(d_);
    for (std::size_t j = 0; j < ks_digits(); ++j) {
      for (std::size_t k = 0; k < d_; ++k)
        digit[k] = (t2[k] >> (j * base_bits_)) & mask;
      out.c0 = add(out.c0, mul(digit, ks.rows[j].first));
      out.c1 = add(out.c1, mul(digit, ks.rows[j].second));
    }
    out.var = var_mul(x.var, y.var) + var_ks();
    if (!var_safe(out.var))
      throw NoiseOverflowError("multiplication: noise budget exhausted");
    return out;
  }

  double var_fresh_sym() const { return sigma_ * sigma_; }

  // Public-key encryption noise e1 + e2*s - e*u.
  double var_fresh_pk() const {
    const double s2 = sigma_ * sigma_;
    return s2 * (1.0 + 2.0 * static_cast<double>(d_) * s2);
  }

  // Scaled-tensor growth: each input's noise is convolved with the other
  // plaintext (second moment ~ t^2/3 per coefficient) over d terms, plus
  // the rounding term.
  double var_mul(double v1, double v2) const {
    const double tt = static_cast<double>(t_) * static_cast<double>(t_);
    const double dd = static_cast<double>(d_);
    return dd * (tt / 3.0) * (v1 + v2) +
           (1.0 + dd * sigma_ * sigma_) / 12.0;
  }

  double var_ks() const {
    const double T = std::pow(2.0, static_cast<double>(base_bits_));
    return static_cast<double>(ks_digits()) * static_cast<double>(d_) *
           (T * T / 3.0) * sigma_ * sigma_;
  }

private:
  std::vector<i64> centered(const Poly& a) const {
    std::vector<i64> r(d_);
    for (std::size_t i = 0; i < d_; ++i) r[i] = center(a[i], q_);
    return r;
  }

  // Negacyclic convolution accumulated exactly in 128-bit integers.
  void conv_acc(const std::vector<i64>& a, const std::vector<i64>& b,
                std::vector<i128>& acc) const {
    for (std::size_t i = 0; i < d_; ++i) {
      const i128 ai = a[i];
      if (ai == 0) continue;
      for (std::size_t j = 0; j < d_; ++j) {
        const std::size_t k = i + j;
        if (k < d_)
          acc[k] += ai * b[j];
        else
          acc[k - d_] -= ai * b[j];
      }
    }
  }

  // round(t * v / q) per coefficient, reduced into [0, q).
  Poly scale_to_q(const std::vector<i128>& acc) const {
    Poly r(d_);
    const i128 den = static_cast<i128>(q_);
    for (std::size_t k = 0; k < d_; ++k) {
      const i128 num = acc[k] * static_cast<i128>(t_);
      const i128 v = (2 * num + (num < 0 ? -den : den)) / (2 * den);
      r[k] = from_centered(static_cast<i64>(v), q_);
    }
    return r;
  }

  std::size_t d_;
  u64 q_, t_;
  double sigma_;
  unsigned base_bits_;
  NttTables tab_;
};

// Minimal single-ring RLWE baseline used for the comparison harness:
// one quotient ring, two-element ciphertexts, no modulus chain.
struct RlweParams {
  std::size_t N = 0;
  u64 q = 0;
  u64 t = 0;
  double sigma = 0.0;

  void validate() const {
    if (!is_power_of_two(static_cast<u64>(N)))
      throw DomainError("rlwe params: N must be a power of two");
    if (q < 3 || (q & 1) == 0 || q >= (1ull << kMaxModulusBits))
      throw DomainError("rlwe params: bad modulus");
    if ((q - 1) % (2 * static_cast<u64>(N)) != 0)
      throw DomainError("rlwe params: require q == 1 mod 2N");
    if (t < 2 || t >= q || q / t < 2) throw DomainError("rlwe params: bad t");
    if (!(sigma > 0.0)) throw DomainError("rlwe params: sigma must be positive");
  }
};

struct RlweSecretKey {
  NegacyclicBfv::Poly s;
};

struct RlwePublicKey {
  NegacyclicBfv::Poly p0, p1; // p0 = -(a s + e), p1 = a
};

using RlweCiphertext = NegacyclicBfv::Ct;
using RlweRelinKey = NegacyclicBfv::KsKey;

class RlweScheme {
public:
  explicit RlweScheme(RlweParams p)
      : p_(p), core_(p.N, p.q, p.t, p.sigma) {
    p_.validate();
  }

  const RlweParams& params() const { return p_; }
  const NegacyclicBfv& core() const { return core_; }

  std::pair<RlwePublicKey, RlweSecretKey> keygen(SamplerState& state) const {
    const DiscreteGaussian dg(p_.sigma);
    RlweSecretKey sk{core_.gaussian(dg, state)};
    const auto a = core_.uniform(state);
    const auto e = core_.gaussian(dg, state);
    RlwePublicKey pk;
    pk.p0 = core_.sub(core_.zero(), core_.add(core_.mul(a, sk.s), e));
    pk.p1 = a;
    return {pk, sk};
  }

  RlweRelinKey relin_keygen(const RlweSecretKey& sk, SamplerState& state) const {
    return core_.ks_keygen(sk.s, state);
  }

  RlweCiphertext encrypt(const RlwePublicKey& pk,
                         const NegacyclicBfv::Poly& msg,
                         SamplerState& state) const {
    for (u64 c : msg)
      if (c >= p_.t) throw DomainError("rlwe encrypt: coefficient not below t");
    const DiscreteGaussian dg(p_.sigma);
    const auto u = core_.gaussian(dg, state);
    const auto e1 = core_.gaussian(dg, state);
    const auto e2 = core_.gaussian(dg, state);
    RlweCiphertext ct;
    ct.c0 = core_.add(core_.add(core_.mul(pk.p0, u), e1),
                      core_.scale_coeffs(msg, core_.delta()));
    ct.c1 = core_.add(core_.mul(pk.p1, u), e2);
    ct.var = core_.var_fresh_pk();
    return ct;
  }

  NegacyclicBfv::Poly decrypt(const RlweSecretKey& sk,
                              const RlweCiphertext& ct) const {
    if (!core_.var_safe(ct.var))
      throw NoiseOverflowError("rlwe decrypt: noise budget exhausted");
    return core_.dec(sk.s, ct);
  }

  RlweCiphertext add(const RlweCiphertext& a, const RlweCiphertext& b) const {
    return core_.add_ct(a, b);
  }

  RlweCiphertext mul(const RlweRelinKey& rlk, const RlweCiphertext& a,
                     const RlweCiphertext& b) const {
    return core_.mul_ct(a, b, rlk);
  }

private:
  RlweParams p_;
  NegacyclicBfv core_;
};

} // namespace vlwe
