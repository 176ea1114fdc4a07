#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"
#include "vlwe/params.hpp"
#include "vlwe/ring.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <array>
#include <cmath>
#include <cstring>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace vlwe {

// Deterministic randomness: a ChaCha20 keystream under an explicit 32-byte
// seed. The same seed and call sequence always reproduce the same outputs.
// A state is single-owner; derive independent child states with fork().
class SamplerState {
public:
  static SamplerState from_seed(const std::array<std::uint8_t, 32>& seed) {
    return SamplerState(seed);
  }

  static SamplerState from_seed64(u64 seed) {
    std::array<std::uint8_t, 8> le{};
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    std::array<std::uint8_t, 32> full{};
    SHA256(le.data(), le.size(), full.data());
    return SamplerState(full);
  }

  static SamplerState from_os_entropy() {
    std::random_device rd;
    std::array<std::uint8_t, 32> seed{};
    for (std::size_t i = 0; i < seed.size(); i += 4) {
      const std::uint32_t w = rd();
      std::memcpy(seed.data() + i, &w, 4);
    }
    return SamplerState(seed);
  }

  // Child seed = SHA-256(parent seed || index), little-endian index.
  SamplerState fork(u64 index) const {
    std::array<std::uint8_t, 40> buf{};
    std::memcpy(buf.data(), seed_.data(), 32);
    for (int i = 0; i < 8; ++i)
      buf[32 + i] = static_cast<std::uint8_t>(index >> (8 * i));
    std::array<std::uint8_t, 32> child{};
    SHA256(buf.data(), buf.size(), child.data());
    return SamplerState(child);
  }

  const std::array<std::uint8_t, 32>& seed() const { return seed_; }

  void fill(std::span<std::uint8_t> out) {
    for (auto& byte : out) {
      if (pos_ == buf_.size()) refill();
      byte = buf_[pos_++];
    }
  }

  u64 next_u64() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    u64 v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  // Uniform in [0, bound) by rejection on the top range; never a plain
  // remainder of a raw draw.
  u64 uniform_below(u64 bound) {
    if (bound == 0) throw DomainError("uniform_below: bound must be positive");
    const u64 rem = static_cast<u64>((static_cast<u128>(1) << 64) % bound);
    for (;;) {
      const u64 r = next_u64();
      if (rem == 0 || r < static_cast<u64>(0) - rem) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

private:
  explicit SamplerState(const std::array<std::uint8_t, 32>& seed)
      : seed_(seed), ctx_(EVP_CIPHER_CTX_new()) {
    if (!ctx_) throw std::runtime_error("sampler: EVP_CIPHER_CTX_new failed");
    std::array<std::uint8_t, 16> iv{}; // block counter 0, zero nonce
    if (EVP_EncryptInit_ex(ctx_.get(), EVP_chacha20(), nullptr, seed_.data(),
                           iv.data()) != 1)
      throw std::runtime_error("sampler: ChaCha20 init failed");
    pos_ = buf_.size();
  }

  void refill() {
    static const std::array<std::uint8_t, 4096> zeros{};
    int out_len = 0;
    if (EVP_EncryptUpdate(ctx_.get(), buf_.data(), &out_len, zeros.data(),
                          static_cast<int>(zeros.size())) != 1 ||
        out_len != static_cast<int>(buf_.size()))
      throw std::runtime_error("sampler: keystream generation failed");
    pos_ = 0;
  }

  struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
  };

  std::array<std::uint8_t, 32> seed_{};
  std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx_;
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t pos_ = 0;
};

// Discrete Gaussian on the integers, Pr[x] proportional to
// exp(-x^2 / (2 sigma^2)), truncated to [-ceil(tail_cut*sigma),
// ceil(tail_cut*sigma)]. Cumulative-table inversion for sigma <= 20,
// rejection from the uniform envelope above that.
class DiscreteGaussian {
public:
  explicit DiscreteGaussian(double sigma, double tail_cut = 6.0)
      : sigma_(sigma) {
    if (!(sigma > 0.0)) throw DomainError("gaussian: sigma must be positive");
    if (!(tail_cut >= 6.0)) throw DomainError("gaussian: tail_cut must be >= 6");
    bound_ = static_cast<i64>(std::ceil(tail_cut * sigma));
    if (bound_ < 1) bound_ = 1;
    use_cdt_ = sigma <= 20.0;
    if (use_cdt_) {
      const std::size_t width = static_cast<std::size_t>(2 * bound_ + 1);
      cdf_.resize(width);
      double total = 0.0;
      for (std::size_t k = 0; k < width; ++k) {
        const double x = static_cast<double>(static_cast<i64>(k) - bound_);
        total += std::exp(-x * x / (2.0 * sigma * sigma));
        cdf_[k] = total;
      }
      for (auto& c : cdf_) c /= total;
      cdf_.back() = 1.0;
    }
  }

  i64 support_bound() const { return bound_; }

  i64 sample(SamplerState& state) const {
    if (use_cdt_) {
      const double u = state.next_unit_double();
      std::size_t lo = 0, hi = cdf_.size() - 1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cdf_[mid])
          hi = mid;
        else
          lo = mid + 1;
      }
      return static_cast<i64>(lo) - bound_;
    }
    const double s2 = 2.0 * sigma_ * sigma_;
    for (;;) {
      const i64 x =
          static_cast<i64>(state.uniform_below(static_cast<u64>(2 * bound_ + 1))) -
          bound_;
      const double x2 = static_cast<double>(x) * static_cast<double>(x);
      if (state.next_unit_double() < std::exp(-x2 / s2)) return x;
    }
  }

private:
  double sigma_;
  i64 bound_;
  bool use_cdt_;
  std::vector<double> cdf_;
};

inline i64 sample_gaussian_int(double sigma, double tail_cut,
                               SamplerState& state) {
  return DiscreteGaussian(sigma, tail_cut).sample(state);
}

// Every coefficient of every coordinate is an independent Gaussian draw,
// reduced mod q.
inline RingElem sample_gaussian_elem(const VarietyParams& params, double sigma,
                                     SamplerState& state) {
  const DiscreteGaussian dg(sigma);
  RingElem e;
  e.coords.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    CoordPoly c(params.degree(i));
    for (auto& v : c) v = from_centered(dg.sample(state), params.q);
    e.coords.push_back(std::move(c));
  }
  return e;
}

inline RingElem sample_uniform_elem(const VarietyParams& params,
                                    SamplerState& state) {
  RingElem e;
  e.coords.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    CoordPoly c(params.degree(i));
    for (auto& v : c) v = state.uniform_below(params.q);
    e.coords.push_back(std::move(c));
  }
  return e;
}

} // namespace vlwe
