#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/noise.hpp"
#include "vlwe/params.hpp"
#include "vlwe/ring.hpp"
#include "vlwe/scheme.hpp"

#include <openssl/sha.h>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

// Binary container: magic "VLW1", version 0x01, type tag, 32-byte params
// digest, then the payload. A bare ring element omits the tag (magic,
// version, digest, n, then d_i and coefficients per coordinate). All
// integers are little-endian 8-byte values.
namespace vlwe {

inline constexpr char kMagic[4] = {'V', 'L', 'W', '1'};
inline constexpr std::uint8_t kVersion = 0x01;

enum class PayloadTag : std::uint8_t {
  SecretKey = 0x01,
  PublicKey = 0x02,
  RelinKey = 0x03,
  Ciphertext = 0x04,
  Params = 0x05,
};

namespace detail {

inline void put_u64(std::vector<std::uint8_t>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
  put_u64(out, std::bit_cast<u64>(v));
}

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  u64 u64_le() {
    if (pos_ + 8 > data_.size()) throw ParseError("container: truncated");
    u64 v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
  }

  double f64_le() { return std::bit_cast<double>(u64_le()); }

  std::uint8_t byte() {
    if (pos_ >= data_.size()) throw ParseError("container: truncated");
    return data_[pos_++];
  }

  void bytes(std::span<std::uint8_t> out) {
    if (pos_ + out.size() > data_.size()) throw ParseError("container: truncated");
    std::memcpy(out.data(), data_.data() + pos_, out.size());
    pos_ += out.size();
  }

  bool done() const { return pos_ == data_.size(); }

private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

} // namespace detail

// Canonical params encoding: n, q, t, then each f_i as its length followed
// by its coefficients. Hashed (SHA-256) into the 32-byte digest carried by
// every container.
inline std::vector<std::uint8_t> canonical_params_bytes(const VarietyParams& p) {
  std::vector<std::uint8_t> out;
  detail::put_u64(out, static_cast<u64>(p.n));
  detail::put_u64(out, p.q);
  detail::put_u64(out, p.t);
  for (const auto& fi : p.f) {
    detail::put_u64(out, static_cast<u64>(fi.size()));
    for (u64 c : fi) detail::put_u64(out, c);
  }
  return out;
}

inline std::array<std::uint8_t, 32> params_digest(const VarietyParams& p) {
  const auto bytes = canonical_params_bytes(p);
  std::array<std::uint8_t, 32> digest{};
  SHA256(bytes.data(), bytes.size(), digest.data());
  return digest;
}

namespace detail {

inline void put_header(std::vector<std::uint8_t>& out, const VarietyParams& p) {
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  const auto digest = params_digest(p);
  out.insert(out.end(), digest.begin(), digest.end());
}

inline void put_tagged_header(std::vector<std::uint8_t>& out, PayloadTag tag,
                              const VarietyParams& p) {
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(tag));
  const auto digest = params_digest(p);
  out.insert(out.end(), digest.begin(), digest.end());
}

inline void check_magic_version(Reader& r) {
  std::array<std::uint8_t, 4> magic{};
  r.bytes(magic);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw ParseError("container: bad magic bytes");
  if (r.byte() != kVersion) throw ParseError("container: unsupported version");
}

inline void check_digest(Reader& r, const VarietyParams& p) {
  std::array<std::uint8_t, 32> digest{};
  r.bytes(digest);
  if (digest != params_digest(p))
    throw ParseError("container: params digest mismatch");
}

inline void put_elem_body(std::vector<std::uint8_t>& out, const RingElem& e) {
  put_u64(out, static_cast<u64>(e.coords.size()));
  for (const auto& coord : e.coords) {
    put_u64(out, static_cast<u64>(coord.size()));
    for (u64 c : coord) put_u64(out, c);
  }
}

inline RingElem get_elem_body(Reader& r, const VarietyParams& p) {
  RingElem e;
  const u64 n = r.u64_le();
  if (n != p.n) throw ParseError("container: coordinate count mismatch");
  e.coords.reserve(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const u64 d = r.u64_le();
    if (d != p.degree(i)) throw ParseError("container: degree mismatch");
    CoordPoly coord(d);
    for (auto& c : coord) {
      c = r.u64_le();
      if (c >= p.q) throw ParseError("container: coefficient not reduced");
    }
    e.coords.push_back(std::move(coord));
  }
  return e;
}

inline void put_elem_mat(std::vector<std::uint8_t>& out,
                         const std::vector<std::vector<RingElem>>& mat) {
  put_u64(out, static_cast<u64>(mat.size()));
  for (const auto& row : mat) {
    put_u64(out, static_cast<u64>(row.size()));
    for (const auto& e : row) put_elem_body(out, e);
  }
}

inline std::vector<std::vector<RingElem>> get_elem_mat(Reader& r,
                                                       const VarietyParams& p) {
  std::vector<std::vector<RingElem>> mat(r.u64_le());
  for (auto& row : mat) {
    row.resize(r.u64_le());
    for (auto& e : row) e = get_elem_body(r, p);
  }
  return mat;
}

} // namespace detail

// ---- bare ring element (no type tag) ----

inline std::vector<std::uint8_t> serialize_elem(const VarietyParams& p,
                                                const RingElem& e) {
  std::vector<std::uint8_t> out;
  detail::put_header(out, p);
  detail::put_elem_body(out, e);
  return out;
}

inline RingElem deserialize_elem(const VarietyParams& p,
                                 std::span<const std::uint8_t> data) {
  detail::Reader r(data);
  detail::check_magic_version(r);
  detail::check_digest(r, p);
  RingElem e = detail::get_elem_body(r, p);
  if (!r.done()) throw ParseError("container: trailing bytes");
  return e;
}

// ---- typed payloads ----

inline std::vector<std::uint8_t> serialize_secret_key(const VarietyParams& p,
                                                      const SecretKey& sk) {
  std::vector<std::uint8_t> out;
  detail::put_tagged_header(out, PayloadTag::SecretKey, p);
  detail::put_u64(out, static_cast<u64>(sk.s.size()));
  for (const auto& e : sk.s) detail::put_elem_body(out, e);
  return out;
}

inline std::vector<std::uint8_t> serialize_public_key(const VarietyParams& p,
                                                      const PublicKey& pk) {
  std::vector<std::uint8_t> out;
  detail::put_tagged_header(out, PayloadTag::PublicKey, p);
  detail::put_elem_mat(out, pk.A);
  detail::put_u64(out, static_cast<u64>(pk.b.size()));
  for (const auto& e : pk.b) detail::put_elem_body(out, e);
  return out;
}

inline std::vector<std::uint8_t> serialize_relin_key(const VarietyParams& p,
                                                     const RelinKey& rlk) {
  std::vector<std::uint8_t> out;
  detail::put_tagged_header(out, PayloadTag::RelinKey, p);
  detail::put_elem_mat(out, rlk.R1);
  detail::put_elem_mat(out, rlk.R2);
  detail::put_elem_mat(out, rlk.A_rel);
  detail::put_elem_mat(out, rlk.B_rel);
  return out;
}

inline std::vector<std::uint8_t> serialize_ciphertext(const VarietyParams& p,
                                                      const Ciphertext& ct) {
  std::vector<std::uint8_t> out;
  detail::put_tagged_header(out, PayloadTag::Ciphertext, p);
  detail::put_u64(out, static_cast<u64>(ct.level));
  out.push_back(ct.needs_relin ? 1 : 0);
  detail::put_u64(out, static_cast<u64>(ct.noise.depth));
  detail::put_u64(out, static_cast<u64>(ct.noise.var.size()));
  for (double v : ct.noise.var) detail::put_f64(out, v);
  detail::put_u64(out, static_cast<u64>(ct.c1.size()));
  for (const auto& e : ct.c1) detail::put_elem_body(out, e);
  detail::put_elem_body(out, ct.c2);
  return out;
}

inline std::vector<std::uint8_t> serialize_params(const SchemeParams& sp) {
  std::vector<std::uint8_t> out;
  detail::put_tagged_header(out, PayloadTag::Params, sp.ring);
  const auto canonical = canonical_params_bytes(sp.ring);
  detail::put_u64(out, static_cast<u64>(canonical.size()));
  out.insert(out.end(), canonical.begin(), canonical.end());
  detail::put_f64(out, sp.ring.sigma);
  detail::put_u64(out, static_cast<u64>(sp.n_lwe));
  detail::put_u64(out, static_cast<u64>(sp.m));
  detail::put_u64(out, static_cast<u64>(sp.modulus_chain.size()));
  for (u64 qk : sp.modulus_chain) detail::put_u64(out, qk);
  out.push_back(static_cast<std::uint8_t>(sp.ntt));
  return out;
}

namespace detail {

inline Reader open_tagged(std::span<const std::uint8_t> data, PayloadTag want,
                          const VarietyParams& p) {
  Reader r(data);
  check_magic_version(r);
  const auto tag = static_cast<PayloadTag>(r.byte());
  if (tag != want) throw ParseError("container: unexpected payload type");
  check_digest(r, p);
  return r;
}

} // namespace detail

inline SecretKey deserialize_secret_key(const VarietyParams& p,
                                        std::span<const std::uint8_t> data) {
  auto r = detail::open_tagged(data, PayloadTag::SecretKey, p);
  SecretKey sk;
  sk.s.resize(r.u64_le());
  for (auto& e : sk.s) e = detail::get_elem_body(r, p);
  if (!r.done()) throw ParseError("container: trailing bytes");
  return sk;
}

inline PublicKey deserialize_public_key(const VarietyParams& p,
                                        std::span<const std::uint8_t> data) {
  auto r = detail::open_tagged(data, PayloadTag::PublicKey, p);
  PublicKey pk;
  pk.A = detail::get_elem_mat(r, p);
  pk.b.resize(r.u64_le());
  for (auto& e : pk.b) e = detail::get_elem_body(r, p);
  if (!r.done()) throw ParseError("container: trailing bytes");
  return pk;
}

inline RelinKey deserialize_relin_key(const VarietyParams& p,
                                      std::span<const std::uint8_t> data) {
  auto r = detail::open_tagged(data, PayloadTag::RelinKey, p);
  RelinKey rlk;
  rlk.R1 = detail::get_elem_mat(r, p);
  rlk.R2 = detail::get_elem_mat(r, p);
  rlk.A_rel = detail::get_elem_mat(r, p);
  rlk.B_rel = detail::get_elem_mat(r, p);
  if (!r.done()) throw ParseError("container: trailing bytes");
  return rlk;
}

// Ciphertexts may live at a smaller chain modulus, so coefficient range
// checks use the level modulus.
inline Ciphertext deserialize_ciphertext(const SchemeParams& sp,
                                         std::span<const std::uint8_t> data) {
  auto r = detail::open_tagged(data, PayloadTag::Ciphertext, sp.ring);
  Ciphertext ct;
  ct.level = static_cast<std::size_t>(r.u64_le());
  const auto chain = sp.chain();
  if (ct.level >= chain.size()) throw ParseError("container: level out of range");
  VarietyParams at_level = sp.ring;
  at_level.q = chain[ct.level];
  ct.needs_relin = r.byte() != 0;
  ct.noise.depth = static_cast<std::size_t>(r.u64_le());
  ct.noise.var.resize(r.u64_le());
  for (auto& v : ct.noise.var) {
    v = r.f64_le();
    if (!(v >= 0.0)) throw ParseError("container: negative noise estimate");
  }
  ct.c1.resize(r.u64_le());
  for (auto& e : ct.c1) e = detail::get_elem_body(r, at_level);
  ct.c2 = detail::get_elem_body(r, at_level);
  if (!r.done()) throw ParseError("container: trailing bytes");
  return ct;
}

inline SchemeParams deserialize_params(std::span<const std::uint8_t> data) {
  detail::Reader r(data);
  detail::check_magic_version(r);
  if (static_cast<PayloadTag>(r.byte()) != PayloadTag::Params)
    throw ParseError("container: unexpected payload type");
  std::array<std::uint8_t, 32> digest{};
  r.bytes(digest);
  const u64 canonical_len = r.u64_le();
  (void)canonical_len;
  SchemeParams sp;
  sp.ring.n = static_cast<std::size_t>(r.u64_le());
  sp.ring.q = r.u64_le();
  sp.ring.t = r.u64_le();
  sp.ring.f.resize(sp.ring.n);
  for (auto& fi : sp.ring.f) {
    fi.resize(r.u64_le());
    for (auto& c : fi) c = r.u64_le();
  }
  sp.ring.sigma = r.f64_le();
  sp.n_lwe = static_cast<std::size_t>(r.u64_le());
  sp.m = static_cast<std::size_t>(r.u64_le());
  sp.modulus_chain.resize(r.u64_le());
  for (auto& qk : sp.modulus_chain) qk = r.u64_le();
  const auto mode = r.byte();
  if (mode > 2) throw ParseError("container: bad transform mode");
  sp.ntt = static_cast<NttMode>(mode);
  if (!r.done()) throw ParseError("container: trailing bytes");
  if (digest != params_digest(sp.ring))
    throw ParseError("container: params digest mismatch");
  sp.validate();
  return sp;
}

// ---- file helpers ----

inline void save_bytes(const std::string& path,
                       std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw ParseError("write failed: " + path);
}

inline std::vector<std::uint8_t> load_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

} // namespace vlwe
