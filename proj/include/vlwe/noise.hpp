#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/params.hpp"
#include "vlwe/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vlwe {

// Analytic per-coordinate coefficient variance. Coordinates are
// independent (no mixed terms), so the covariance is tracked as a
// diagonal: one variance per coordinate.
struct NoiseEstimate {
  std::vector<double> var;
  std::size_t depth = 0;

  double max_var() const {
    double m = 0.0;
    for (double v : var) m = std::max(m, v);
    return m;
  }
  bool operator==(const NoiseEstimate&) const = default;
};

// Fresh encryption noise is e^T r: m products of independent Gaussian ring
// elements, each coefficient a d-term negacyclic convolution, giving
// per-coordinate variance m * d_i * sigma^4.
inline NoiseEstimate noise_fresh(const SchemeParams& sp) {
  const double s2 = sp.ring.sigma * sp.ring.sigma;
  NoiseEstimate est;
  est.var.reserve(sp.ring.n);
  for (std::size_t i = 0; i < sp.ring.n; ++i)
    est.var.push_back(static_cast<double>(sp.m) *
                      static_cast<double>(sp.ring.degree(i)) * s2 * s2);
  est.depth = 0;
  return est;
}

inline NoiseEstimate noise_add(const NoiseEstimate& a, const NoiseEstimate& b) {
  if (a.var.size() != b.var.size())
    throw ShapeError("noise_add: coordinate count mismatch");
  NoiseEstimate r = a;
  for (std::size_t i = 0; i < r.var.size(); ++i) r.var[i] += b.var[i];
  r.depth = std::max(a.depth, b.depth) + 1;
  return r;
}

// Multiplicative growth as the source model states it:
// sigma_mult^2 = (sigma^2 + sigma'^2) * (sigma^2 + sigma'^2).
// The squared-variance dimensions are kept as written; the simulation
// harness reports the discrepancy against measurement instead of
// correcting it silently.
inline NoiseEstimate noise_mul(const NoiseEstimate& a, const NoiseEstimate& b) {
  if (a.var.size() != b.var.size())
    throw ShapeError("noise_mul: coordinate count mismatch");
  NoiseEstimate r = a;
  for (std::size_t i = 0; i < r.var.size(); ++i) {
    const double s = a.var[i] + b.var[i];
    r.var[i] = s * s;
  }
  r.depth = std::max(a.depth, b.depth) + 1;
  return r;
}

// Relinearization adds the two R-matrix contributions (c_rel copies of the
// input variance, default 2) plus the key noise folded over one coordinate
// convolution: var * (1 + c_rel) + d * relin_sigma^2.
inline NoiseEstimate noise_relin(const NoiseEstimate& m, double relin_sigma,
                                 const std::vector<std::size_t>& degrees,
                                 double c_rel = 2.0) {
  if (m.var.size() != degrees.size())
    throw ShapeError("noise_relin: coordinate count mismatch");
  NoiseEstimate r = m;
  for (std::size_t i = 0; i < r.var.size(); ++i)
    r.var[i] = m.var[i] * (1.0 + c_rel) +
               static_cast<double>(degrees[i]) * relin_sigma * relin_sigma;
  r.depth = m.depth + 1;
  return r;
}

// Rescaling by q_to/q_from shrinks existing noise quadratically and adds
// the rounding contribution: coefficient rounding of c2 (variance 1/12)
// plus the c1 rounding errors convolved with the secret
// (n_lwe * d * sigma^2 / 12 per coefficient).
inline NoiseEstimate noise_mod_switch(const NoiseEstimate& est, u64 q_from,
                                      u64 q_to, std::size_t n_lwe,
                                      const std::vector<std::size_t>& degrees,
                                      double sigma) {
  if (est.var.size() != degrees.size())
    throw ShapeError("noise_mod_switch: coordinate count mismatch");
  const double ratio = static_cast<double>(q_to) / static_cast<double>(q_from);
  NoiseEstimate r = est;
  for (std::size_t i = 0; i < r.var.size(); ++i)
    r.var[i] = est.var[i] * ratio * ratio +
               (1.0 + static_cast<double>(n_lwe) *
                          static_cast<double>(degrees[i]) * sigma * sigma) /
                   12.0;
  r.depth = est.depth + 1;
  return r;
}

// Iterated-operation growth sigma_t = C * n^(t/2) * d^t * sigma
// (asymptotic shape with an explicit constant, default 1).
inline double noise_iterated(int t_ops, std::size_t n, std::size_t d,
                             double sigma, double constant = 1.0) {
  if (t_ops < 0) throw DomainError("noise_iterated: t_ops must be >= 0");
  return constant *
         std::pow(static_cast<double>(n), static_cast<double>(t_ops) / 2.0) *
         std::pow(static_cast<double>(d), static_cast<double>(t_ops)) * sigma;
}

// Decryption is reliable when the 6-sigma envelope of the tracked noise
// stays under half the plaintext scale.
inline bool decryption_safe(const NoiseEstimate& est, u64 q, u64 t) {
  const double delta = static_cast<double>(q / t);
  return 6.0 * std::sqrt(est.max_var()) < delta / 2.0;
}

// For no-mixed-terms varieties the Jacobian is diagonal with entries
// f_i'(x_i); the amplification factor is the largest |f_i'| seen over
// sampled points, evaluated over the integers on centered coefficients.
inline double jacobian_bound(const VarietyParams& params,
                             std::size_t sample_count, SamplerState& state) {
  if (sample_count < 1)
    throw DomainError("jacobian_bound: sample_count must be >= 1");
  double bound = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double x =
        static_cast<double>(center(state.uniform_below(params.q), params.q));
    for (std::size_t i = 0; i < params.n; ++i) {
      // derivative coefficients: j * f_j for j = 1..d
      const auto& fi = params.f[i];
      double acc = 0.0;
      for (std::size_t j = fi.size() - 1; j >= 1; --j) {
        const double cj = static_cast<double>(center(fi[j], params.q)) *
                          static_cast<double>(j);
        acc = acc * x + cj;
      }
      bound = std::max(bound, std::abs(acc));
    }
  }
  return bound;
}

} // namespace vlwe
