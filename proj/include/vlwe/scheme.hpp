#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"
#include "vlwe/noise.hpp"
#include "vlwe/params.hpp"
#include "vlwe/ring.hpp"
#include "vlwe/sampler.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace vlwe {

struct SecretKey {
  std::vector<RingElem> s; // n_lwe entries, small-secret distribution
};

struct PublicKey {
  std::vector<std::vector<RingElem>> A; // m x n_lwe
  std::vector<RingElem> b;              // m entries, b = A s + e
};

// Relinearization key R1 = A_rel . s + E1, R2 = B_rel . s + E2, typed
// entrywise: R[i][j] = A[i][j] * s[j] + E[i][j]. The generation matrices
// are retained for audit.
struct RelinKey {
  std::vector<std::vector<RingElem>> R1, R2;
  std::vector<std::vector<RingElem>> A_rel, B_rel;
};

struct Plaintext {
  RingElem msg; // all coefficients in [0, t)
};

struct Ciphertext {
  std::vector<RingElem> c1; // n_lwe entries
  RingElem c2;
  NoiseEstimate noise;
  std::size_t level = 0;
  bool needs_relin = false;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

// Per-coordinate agreement of the as-written multiplication against the
// coordinate-wise plaintext product; report-only.
struct MulAgreementReport {
  std::size_t trials = 0;
  std::size_t coordinates_total = 0;
  std::size_t coordinates_agreeing = 0;
  double rate() const {
    return coordinates_total == 0
               ? 0.0
               : static_cast<double>(coordinates_agreeing) /
                     static_cast<double>(coordinates_total);
  }
};

// The vector encryption scheme. Keys are immutable after generation;
// evaluation and decryption are pure, so a Scheme plus its keys may be
// shared across threads (encryption needs one SamplerState per thread).
class Scheme {
public:
  explicit Scheme(SchemeParams sp) : sp_(std::move(sp)) {
    sp_.validate();
    for (u64 qk : sp_.chain()) {
      VarietyParams p = sp_.ring;
      p.q = qk;
      rings_.emplace_back(std::move(p), sp_.ntt);
    }
  }

  const SchemeParams& params() const { return sp_; }
  const Ring& ring(std::size_t level = 0) const { return rings_.at(level); }
  std::size_t levels() const { return rings_.size(); }

  Plaintext encode_vector(std::span<const u64> values) const {
    for (u64 v : values)
      if (v >= sp_.ring.t)
        throw DomainError("encode_vector: entry not below t");
    Plaintext pt;
    pt.msg = ring().from_constants(values);
    return pt;
  }

  std::vector<u64> decode_vector(const Plaintext& pt) const {
    std::vector<u64> out;
    out.reserve(sp_.ring.n);
    for (const auto& coord : pt.msg.coords) out.push_back(coord[0]);
    return out;
  }

  KeyPair keygen(SamplerState& state) const {
    const Ring& R = ring();
    KeyPair kp;
    kp.sk.s.reserve(sp_.n_lwe);
    for (std::size_t k = 0; k < sp_.n_lwe; ++k)
      kp.sk.s.push_back(sample_gaussian_elem(R.params(), sp_.ring.sigma, state));
    kp.pk.A.assign(sp_.m, {});
    kp.pk.b.reserve(sp_.m);
    for (std::size_t j = 0; j < sp_.m; ++j) {
      kp.pk.A[j].reserve(sp_.n_lwe);
      for (std::size_t k = 0; k < sp_.n_lwe; ++k)
        kp.pk.A[j].push_back(sample_uniform_elem(R.params(), state));
    }
    for (std::size_t j = 0; j < sp_.m; ++j) {
      RingElem acc = R.zero();
      for (std::size_t k = 0; k < sp_.n_lwe; ++k)
        acc = R.add(acc, R.mul(kp.pk.A[j][k], kp.sk.s[k]));
      const RingElem e = sample_gaussian_elem(R.params(), sp_.ring.sigma, state);
      kp.pk.b.push_back(R.add(acc, e));
    }
    return kp;
  }

  RelinKey relin_keygen(const SecretKey& sk, SamplerState& state) const {
    const Ring& R = ring();
    RelinKey rlk;
    auto gen = [&](std::vector<std::vector<RingElem>>& mat,
                   std::vector<std::vector<RingElem>>& out) {
      mat.assign(sp_.n_lwe, {});
      out.assign(sp_.n_lwe, {});
      for (std::size_t i = 0; i < sp_.n_lwe; ++i) {
        mat[i].reserve(sp_.n_lwe);
        out[i].reserve(sp_.n_lwe);
        for (std::size_t j = 0; j < sp_.n_lwe; ++j) {
          mat[i].push_back(sample_uniform_elem(R.params(), state));
          const RingElem e =
              sample_gaussian_elem(R.params(), sp_.ring.sigma, state);
          out[i].push_back(R.add(R.mul(mat[i][j], sk.s[j]), e));
        }
      }
    };
    gen(rlk.A_rel, rlk.R1);
    gen(rlk.B_rel, rlk.R2);
    return rlk;
  }

  // c1 = A^T r, c2 = b^T r + Delta * msg with r ~ chi^m.
  Ciphertext encrypt(const PublicKey& pk, const Plaintext& pt,
                     SamplerState& state) const {
    std::vector<RingElem> r;
    r.reserve(sp_.m);
    for (std::size_t j = 0; j < sp_.m; ++j)
      r.push_back(sample_gaussian_elem(sp_.ring, sp_.ring.sigma, state));
    return encrypt_with_randomness(pk, pt, r);
  }

  // Test hook: explicit encryption randomness.
  Ciphertext encrypt_with_randomness(const PublicKey& pk, const Plaintext& pt,
                                     const std::vector<RingElem>& r) const {
    const Ring& R = ring();
    check_plaintext(pt);
    if (r.size() != sp_.m)
      throw ShapeError("encrypt: randomness must have m entries");
    Ciphertext ct;
    ct.c1.reserve(sp_.n_lwe);
    for (std::size_t k = 0; k < sp_.n_lwe; ++k) {
      RingElem acc = R.zero();
      for (std::size_t j = 0; j < sp_.m; ++j)
        acc = R.add(acc, R.mul(pk.A[j][k], r[j]));
      ct.c1.push_back(std::move(acc));
    }
    RingElem acc = R.scale_coeffs(pt.msg, sp_.ring.delta());
    for (std::size_t j = 0; j < sp_.m; ++j)
      acc = R.add(acc, R.mul(pk.b[j], r[j]));
    ct.c2 = std::move(acc);
    ct.noise = noise_fresh(sp_);
    ct.level = 0;
    ct.needs_relin = false;
    return ct;
  }

  // w = c2 - c1^T s before any rounding.
  RingElem decrypt_raw(const SecretKey& sk, const Ciphertext& ct) const {
    const Ring& R = ring(ct.level);
    if (sk.s.size() != ct.c1.size())
      throw ShapeError("decrypt: key/ciphertext dimension mismatch");
    RingElem w = ct.c2;
    for (std::size_t k = 0; k < sk.s.size(); ++k)
      w = R.sub(w, R.mul(ct.c1[k], secret_at_level(sk.s[k], ct.level)));
    return w;
  }

  // Per coefficient (centered): round(w * t / q) mod t. Correct whenever
  // the true noise magnitude stays below Delta/2.
  Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct) const {
    Plaintext pt;
    pt.msg = scale_round(decrypt_raw(sk, ct), rings_.at(ct.level).modulus(),
                         sp_.ring.t);
    return pt;
  }

  Ciphertext eval_add(const Ciphertext& a, const Ciphertext& b) const {
    check_level(a, b);
    const Ring& R = ring(a.level);
    Ciphertext r;
    r.c1.reserve(a.c1.size());
    for (std::size_t k = 0; k < a.c1.size(); ++k)
      r.c1.push_back(R.add(a.c1[k], b.c1[k]));
    r.c2 = R.add(a.c2, b.c2);
    r.noise = noise_add(a.noise, b.noise);
    r.level = a.level;
    r.needs_relin = a.needs_relin || b.needs_relin;
    return r;
  }

  // Coordinate-wise product, entry k with entry k, exactly as written in
  // the source construction. The output is flagged pre-relinearization;
  // whether it decrypts to the plaintext product is reported empirically
  // by mul_agreement(), not assumed.
  Ciphertext eval_mul_literal(const Ciphertext& a, const Ciphertext& b) const {
    check_level(a, b);
    const Ring& R = ring(a.level);
    Ciphertext r;
    r.c1.reserve(a.c1.size());
    for (std::size_t k = 0; k < a.c1.size(); ++k)
      r.c1.push_back(R.mul(a.c1[k], b.c1[k]));
    r.c2 = R.mul(a.c2, b.c2);
    r.noise = noise_mul(a.noise, b.noise);
    r.level = a.level;
    r.needs_relin = true;
    return r;
  }

  // c1_rel = c1 + R1 c2 (matrix-vector, broadcasting c2),
  // c2_rel = c2 + (R2 c2) contracted over row 0.
  Ciphertext relinearize(const RelinKey& rlk, const Ciphertext& ct) const {
    if (!ct.needs_relin)
      throw DomainError("relinearize: ciphertext is not flagged pre-relin");
    if (rlk.R1.size() != sp_.n_lwe || rlk.R2.size() != sp_.n_lwe)
      throw ShapeError("relinearize: key dimension mismatch");
    const Ring& R = ring(ct.level);
    Ciphertext r = ct;
    for (std::size_t i = 0; i < sp_.n_lwe; ++i) {
      RingElem acc = ct.c1[i];
      for (std::size_t j = 0; j < sp_.n_lwe; ++j)
        acc = R.add(acc, R.mul(rlk.R1[i][j], ct.c2));
      r.c1[i] = std::move(acc);
    }
    RingElem acc2 = ct.c2;
    for (std::size_t j = 0; j < sp_.n_lwe; ++j)
      acc2 = R.add(acc2, R.mul(rlk.R2[0][j], ct.c2));
    r.c2 = std::move(acc2);
    r.noise = noise_relin(ct.noise, sp_.ring.sigma, degrees());
    r.needs_relin = false;
    return r;
  }

  // Rescale every component to the chain modulus at target_level.
  Ciphertext mod_switch(const Ciphertext& ct, std::size_t target_level) const {
    if (target_level >= rings_.size())
      throw DomainError("mod_switch: no such level in the modulus chain");
    const u64 q_from = rings_.at(ct.level).modulus();
    const u64 q_to = rings_.at(target_level).modulus();
    if (q_to == q_from) return ct; // switching to the same modulus
    if (q_to > q_from)
      throw DomainError("mod_switch: target modulus must be smaller");
    Ciphertext r = ct;
    for (auto& c : r.c1) c = scale_round(c, q_from, q_to);
    r.c2 = scale_round(ct.c2, q_from, q_to);
    r.noise = noise_mod_switch(ct.noise, q_from, q_to, sp_.n_lwe, degrees(),
                               sp_.ring.sigma);
    r.level = target_level;
    return r;
  }

  // One VLWE sample (a, b = a s + e); with uniform_b set, b is drawn
  // uniformly instead (the decision problem's other branch).
  std::pair<RingElem, RingElem> vlwe_sample(const RingElem& s,
                                            SamplerState& state,
                                            bool uniform_b = false) const {
    const Ring& R = ring();
    const RingElem a = sample_uniform_elem(R.params(), state);
    if (uniform_b) return {a, sample_uniform_elem(R.params(), state)};
    const RingElem e = sample_gaussian_elem(R.params(), sp_.ring.sigma, state);
    return {a, R.add(R.mul(a, s), e)};
  }

  // Per-coordinate infinity norm of (decrypt_raw - Delta * true_msg),
  // centered: the empirical counterpart of the analytic estimates.
  std::vector<double> measure_noise(const SecretKey& sk, const Ciphertext& ct,
                                    const Plaintext& true_pt) const {
    const Ring& R = ring(ct.level);
    const u64 q = R.modulus();
    const RingElem w = decrypt_raw(sk, ct);
    const RingElem expected =
        R.scale_coeffs(true_pt.msg, VarietyParams::delta_at(q, sp_.ring.t));
    std::vector<double> norms;
    norms.reserve(sp_.ring.n);
    for (std::size_t i = 0; i < sp_.ring.n; ++i) {
      double norm = 0.0;
      for (std::size_t j = 0; j < w.coords[i].size(); ++j) {
        const u64 diff = sub_mod(w.coords[i][j], expected.coords[i][j], q);
        norm = std::max(norm, std::abs(static_cast<double>(center(diff, q))));
      }
      norms.push_back(norm);
    }
    return norms;
  }

  // Empirical per-coordinate agreement of decrypt(relin(mul_literal)) with
  // u * v mod t over random plaintext pairs.
  MulAgreementReport mul_agreement(const KeyPair& kp, const RelinKey& rlk,
                                   std::size_t trials,
                                   SamplerState& state) const {
    const Ring& R = ring();
    MulAgreementReport rep;
    rep.trials = trials;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      std::vector<u64> u(sp_.ring.n), v(sp_.ring.n);
      for (auto& x : u) x = state.uniform_below(sp_.ring.t);
      for (auto& x : v) x = state.uniform_below(sp_.ring.t);
      const Ciphertext prod = relinearize(
          rlk, eval_mul_literal(encrypt(kp.pk, encode_vector(u), state),
                                encrypt(kp.pk, encode_vector(v), state)));
      const auto got = decode_vector(decrypt(kp.sk, prod));
      for (std::size_t i = 0; i < sp_.ring.n; ++i) {
        ++rep.coordinates_total;
        if (got[i] == mul_mod(u[i], v[i], sp_.ring.t)) ++rep.coordinates_agreeing;
      }
    }
    return rep;
  }

private:
  void check_plaintext(const Plaintext& pt) const {
    ring().check_shape(pt.msg);
    for (const auto& coord : pt.msg.coords)
      for (u64 c : coord)
        if (c >= sp_.ring.t)
          throw DomainError("plaintext coefficient not below t");
  }

  void check_level(const Ciphertext& a, const Ciphertext& b) const {
    if (a.level != b.level)
      throw DomainError("evaluation: ciphertext levels differ");
    if (a.c1.size() != b.c1.size())
      throw ShapeError("evaluation: ciphertext dimensions differ");
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> ds;
    ds.reserve(sp_.ring.n);
    for (std::size_t i = 0; i < sp_.ring.n; ++i) ds.push_back(sp_.ring.degree(i));
    return ds;
  }

  // The secret is small, so its centered lift is meaningful at every
  // chain modulus.
  RingElem secret_at_level(const RingElem& s, std::size_t level) const {
    if (level == 0) return s;
    const u64 q0 = rings_[0].modulus();
    const u64 ql = rings_[level].modulus();
    RingElem r = s;
    for (auto& coord : r.coords)
      for (auto& c : coord) c = from_centered(center(c, q0), ql);
    return r;
  }

  SchemeParams sp_;
  std::vector<Ring> rings_;
};

} // namespace vlwe
