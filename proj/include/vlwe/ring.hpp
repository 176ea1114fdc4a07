#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"
#include "vlwe/ntt.hpp"
#include "vlwe/params.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vlwe {

// Residue of one coordinate: d_i coefficients in [0, q).
using CoordPoly = std::vector<u64>;

// One element of R_q: a sequence of n coordinate polynomials. All ring
// operations act coordinate-wise and never produce cross-coordinate terms.
struct RingElem {
  std::vector<CoordPoly> coords;
  bool operator==(const RingElem&) const = default;
};

// Reference multiplication in Z_q[x]/<f_i>: exact convolution followed by
// long division by the monic f_i. This is the oracle the transform path is
// checked against, so it stays independent of NttTables.
inline CoordPoly coord_mul_schoolbook(const CoordPoly& a, const CoordPoly& b,
                                      const std::vector<u64>& f_i, u64 q) {
  const std::size_t d = f_i.size() - 1;
  if (a.size() != d || b.size() != d)
    throw ShapeError("coord_mul_schoolbook: operand degree mismatch");
  if (d == 0) throw ShapeError("coord_mul_schoolbook: f_i must have degree >= 1");
  std::vector<u64> conv(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      conv[i + j] = add_mod(conv[i + j], mul_mod(a[i], b[j], q), q);
  }
  // eliminate x^k for k = 2d-2 .. d using x^d = -(f_0 + f_1 x + ...)
  for (std::size_t k = 2 * d - 2; k + 1 > d; --k) {
    const u64 c = conv[k];
    if (c == 0) continue;
    conv[k] = 0;
    for (std::size_t j = 0; j < d; ++j)
      conv[k - d + j] = sub_mod(conv[k - d + j], mul_mod(c, f_i[j], q), q);
  }
  conv.resize(d);
  return conv;
}

// Arithmetic context for one VarietyParams instance. Holds the per-
// coordinate transform tables; read-only after construction, so a Ring
// may be shared freely across threads.
class Ring {
public:
  explicit Ring(VarietyParams params, NttMode mode = NttMode::Auto)
      : params_(std::move(params)) {
    params_.validate();
    tables_.reserve(params_.n);
    for (std::size_t i = 0; i < params_.n; ++i) {
      std::optional<NttTables> t;
      if (mode != NttMode::Disable && is_negacyclic(params_.f[i]))
        t = NttTables::try_build(params_.degree(i), params_.q);
      if (mode == NttMode::Require && !t)
        throw CapabilityError(
            "ring: coordinate " + std::to_string(i) +
            " has no fast transform (need f_i = x^d + 1, d a power of two, "
            "q == 1 mod 2d)");
      tables_.push_back(std::move(t));
    }
  }

  const VarietyParams& params() const { return params_; }
  std::size_t coordinates() const { return params_.n; }
  u64 modulus() const { return params_.q; }
  bool ntt_enabled(std::size_t i) const { return tables_[i].has_value(); }

  RingElem zero() const {
    RingElem e;
    e.coords.reserve(params_.n);
    for (std::size_t i = 0; i < params_.n; ++i)
      e.coords.emplace_back(params_.degree(i), 0);
    return e;
  }

  RingElem one() const { return from_constant(1); }

  RingElem from_constant(u64 c) const {
    RingElem e = zero();
    for (auto& coord : e.coords) coord[0] = c % params_.q;
    return e;
  }

  // Constant coordinate polynomials, one value per coordinate.
  RingElem from_constants(std::span<const u64> values) const {
    if (values.size() != params_.n)
      throw ShapeError("from_constants: need one value per coordinate");
    RingElem e = zero();
    for (std::size_t i = 0; i < params_.n; ++i)
      e.coords[i][0] = values[i] % params_.q;
    return e;
  }

  void check_shape(const RingElem& e) const {
    if (e.coords.size() != params_.n)
      throw ShapeError("ring element: coordinate count mismatch");
    for (std::size_t i = 0; i < params_.n; ++i)
      if (e.coords[i].size() != params_.degree(i))
        throw ShapeError("ring element: degree mismatch in coordinate " +
                         std::to_string(i));
  }

  RingElem add(const RingElem& a, const RingElem& b) const {
    check_shape(a);
    check_shape(b);
    RingElem r = a;
    for (std::size_t i = 0; i < params_.n; ++i)
      for (std::size_t j = 0; j < r.coords[i].size(); ++j)
        r.coords[i][j] = add_mod(r.coords[i][j], b.coords[i][j], params_.q);
    return r;
  }

  RingElem sub(const RingElem& a, const RingElem& b) const {
    check_shape(a);
    check_shape(b);
    RingElem r = a;
    for (std::size_t i = 0; i < params_.n; ++i)
      for (std::size_t j = 0; j < r.coords[i].size(); ++j)
        r.coords[i][j] = sub_mod(r.coords[i][j], b.coords[i][j], params_.q);
    return r;
  }

  RingElem negate(const RingElem& a) const {
    check_shape(a);
    RingElem r = a;
    for (auto& coord : r.coords)
      for (auto& c : coord) c = neg_mod(c, params_.q);
    return r;
  }

  CoordPoly coord_mul(std::size_t i, const CoordPoly& a,
                      const CoordPoly& b) const {
    if (tables_[i]) {
      if (a.size() != params_.degree(i) || b.size() != params_.degree(i))
        throw ShapeError("coord_mul: operand degree mismatch");
      return tables_[i]->negacyclic_mul(a, b);
    }
    return coord_mul_schoolbook(a, b, params_.f[i], params_.q);
  }

  CoordPoly coord_mul_ntt(std::size_t i, const CoordPoly& a,
                          const CoordPoly& b) const {
    if (!tables_[i])
      throw CapabilityError("coord_mul_ntt: no transform for coordinate " +
                            std::to_string(i));
    if (a.size() != params_.degree(i) || b.size() != params_.degree(i))
      throw ShapeError("coord_mul_ntt: operand degree mismatch");
    return tables_[i]->negacyclic_mul(a, b);
  }

  RingElem mul(const RingElem& a, const RingElem& b) const {
    check_shape(a);
    check_shape(b);
    RingElem r;
    r.coords.reserve(params_.n);
    for (std::size_t i = 0; i < params_.n; ++i)
      r.coords.push_back(coord_mul(i, a.coords[i], b.coords[i]));
    return r;
  }

  RingElem mul_schoolbook(const RingElem& a, const RingElem& b) const {
    check_shape(a);
    check_shape(b);
    RingElem r;
    r.coords.reserve(params_.n);
    for (std::size_t i = 0; i < params_.n; ++i)
      r.coords.push_back(
          coord_mul_schoolbook(a.coords[i], b.coords[i], params_.f[i], params_.q));
    return r;
  }

  // Multiply every coefficient by a scalar (used for the Delta*m encoding).
  RingElem scale_coeffs(const RingElem& a, u64 factor) const {
    check_shape(a);
    RingElem r = a;
    const u64 fq = factor % params_.q;
    for (auto& coord : r.coords)
      for (auto& c : coord) c = mul_mod(c, fq, params_.q);
    return r;
  }

  std::vector<CoordPoly> decompose(const RingElem& e) const {
    check_shape(e);
    return e.coords;
  }

  RingElem recompose(std::vector<CoordPoly> parts) const {
    if (parts.size() != params_.n)
      throw ShapeError("recompose: part count mismatch");
    RingElem e;
    e.coords = std::move(parts);
    check_shape(e);
    return e;
  }

  const NttTables* tables(std::size_t i) const {
    return tables_[i] ? &*tables_[i] : nullptr;
  }

private:
  static bool is_negacyclic(const std::vector<u64>& fi) {
    const std::size_t d = fi.size() - 1;
    if (!is_power_of_two(static_cast<u64>(d))) return false;
    if (fi[0] != 1 || fi[d] != 1) return false;
    for (std::size_t j = 1; j < d; ++j)
      if (fi[j] != 0) return false;
    return true;
  }

  VarietyParams params_;
  std::vector<std::optional<NttTables>> tables_;
};

// Rescale every coefficient from modulus q_from to q_to by rounding the
// centered representative; core of modulus switching and of decryption's
// final round-to-t step.
inline RingElem scale_round(const RingElem& e, u64 q_from, u64 q_to) {
  if (q_to >= q_from)
    throw DomainError("scale_round: target modulus must be smaller");
  RingElem r = e;
  for (auto& coord : r.coords)
    for (auto& c : coord) c = scale_round_coeff(c, q_from, q_to);
  return r;
}

} // namespace vlwe
