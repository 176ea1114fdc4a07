#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/rlwe.hpp"
#include "vlwe/scheme.hpp"

#include <cstddef>
#include <vector>

namespace vlwe {

// Two-element ciphertext per coordinate.
struct RefCiphertext {
  RingElem c0, c1;
  std::vector<double> var; // per coordinate
};

struct RefRelinKey {
  std::vector<NegacyclicBfv::KsKey> coord; // one key-switch key per coordinate
};

// Correctness oracle for multiplicative homomorphism: a standard
// scale-and-tensor scheme run independently in every coordinate ring,
// keyed by the first secret element of the main scheme. Stays a separate
// code path from eval_mul_literal, which it is used to audit.
class RefPath {
public:
  explicit RefPath(const Scheme& scheme) : scheme_(&scheme) {
    const SchemeParams& sp = scheme.params();
    cores_.reserve(sp.ring.n);
    for (std::size_t i = 0; i < sp.ring.n; ++i) {
      if (!scheme.ring().ntt_enabled(i))
        throw CapabilityError(
            "reference path: coordinate " + std::to_string(i) +
            " is not transform-friendly");
      cores_.emplace_back(sp.ring.degree(i), sp.ring.q, sp.ring.t,
                          sp.ring.sigma);
    }
  }

  RefRelinKey relin_keygen(const SecretKey& sk, SamplerState& state) const {
    RefRelinKey key;
    key.coord.reserve(cores_.size());
    for (std::size_t i = 0; i < cores_.size(); ++i)
      key.coord.push_back(cores_[i].ks_keygen(coord_secret(sk, i), state));
    return key;
  }

  RefCiphertext encrypt(const SecretKey& sk, const Plaintext& pt,
                        SamplerState& state) const {
    scheme_->ring().check_shape(pt.msg);
    RefCiphertext ct;
    ct.c0.coords.reserve(cores_.size());
    ct.c1.coords.reserve(cores_.size());
    for (std::size_t i = 0; i < cores_.size(); ++i) {
      auto c = cores_[i].enc_sym(coord_secret(sk, i), pt.msg.coords[i], state);
      ct.c0.coords.push_back(std::move(c.c0));
      ct.c1.coords.push_back(std::move(c.c1));
      ct.var.push_back(c.var);
    }
    return ct;
  }

  RefCiphertext eval_mul(const RefRelinKey& rlk, const RefCiphertext& a,
                         const RefCiphertext& b) const {
    if (rlk.coord.size() != cores_.size())
      throw ShapeError("reference mul: relin key coordinate count mismatch");
    RefCiphertext out;
    out.c0.coords.reserve(cores_.size());
    out.c1.coords.reserve(cores_.size());
    for (std::size_t i = 0; i < cores_.size(); ++i) {
      NegacyclicBfv::Ct x{a.c0.coords[i], a.c1.coords[i], a.var[i]};
      NegacyclicBfv::Ct y{b.c0.coords[i], b.c1.coords[i], b.var[i]};
      auto z = cores_[i].mul_ct(x, y, rlk.coord[i]);
      out.c0.coords.push_back(std::move(z.c0));
      out.c1.coords.push_back(std::move(z.c1));
      out.var.push_back(z.var);
    }
    return out;
  }

  Plaintext decrypt(const SecretKey& sk, const RefCiphertext& ct) const {
    Plaintext pt;
    pt.msg.coords.reserve(cores_.size());
    for (std::size_t i = 0; i < cores_.size(); ++i) {
      NegacyclicBfv::Ct c{ct.c0.coords[i], ct.c1.coords[i], ct.var[i]};
      pt.msg.coords.push_back(cores_[i].dec(coord_secret(sk, i), c));
    }
    return pt;
  }

private:
  const NegacyclicBfv::Poly& coord_secret(const SecretKey& sk,
                                          std::size_t i) const {
    if (sk.s.empty()) throw ShapeError("reference path: empty secret key");
    return sk.s[0].coords[i];
  }

  const Scheme* scheme_;
  std::vector<NegacyclicBfv> cores_;
};

} // namespace vlwe
