#pragma once
#include "vlwe/errors.hpp"
#include "vlwe/modarith.hpp"
#include "vlwe/ntt.hpp"
#include "vlwe/params.hpp"
#include "vlwe/ring.hpp"
#include "vlwe/rlwe.hpp"
#include "vlwe/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace vlwe {

struct BenchRow {
  std::string config;
  std::size_t n = 0;
  double median_ns = 0.0;
};

struct NoiseGrowthRow {
  std::string config;
  double measured_sd = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double vlwe_exponent = 0.0;      // fitted: log(time) vs log(n), VLWE mul
  double rlwe_full_exponent = 0.0; // same fit for the degree-(n*d) RLWE mul
  std::vector<NoiseGrowthRow> noise_rows;

  std::string to_tsv() const {
    std::ostringstream out;
    out << "config\tmedian_ns\n";
    for (const auto& r : rows) out << r.config << "\t" << r.median_ns << "\n";
    out << "fit\tvlwe_exponent=" << vlwe_exponent
        << "\trlwe_full_exponent=" << rlwe_full_exponent << "\n";
    if (!noise_rows.empty()) {
      out << "noise_config\tmeasured_sd\n";
      for (const auto& r : noise_rows)
        out << r.config << "\t" << r.measured_sd << "\n";
    }
    return out.str();
  }
};

namespace detail {

// Median wall time of one operation over `reps` batches. The batch size
// is calibrated so each batch runs ~400us, which keeps clock granularity,
// loop overhead, and frequency ramping out of the per-op estimate; a
// short warm-up precedes the calibration.
template <typename Fn>
double median_op_ns(std::size_t reps, Fn&& op) {
  using ClockT = std::chrono::steady_clock;
  auto run_batch = [&](std::size_t count) {
    const auto start = ClockT::now();
    for (std::size_t b = 0; b < count; ++b) op();
    return std::chrono::duration<double, std::nano>(ClockT::now() - start)
        .count();
  };
  const auto warm_start = ClockT::now();
  do {
    op();
  } while (std::chrono::duration<double>(ClockT::now() - warm_start).count() <
           0.02);
  const double probe_ns = run_batch(4) / 4.0;
  const std::size_t batch = std::max<std::size_t>(
      1, static_cast<std::size_t>(400'000.0 / std::max(probe_ns, 1.0)));
  std::vector<double> times;
  times.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r)
    times.push_back(run_batch(batch) / static_cast<double>(batch));
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

inline double fit_log_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(pts.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace detail

// Times (a) one VLWE element multiplication at each (n, d), (b) n
// independent degree-d RLWE ring multiplications, and (c) one RLWE ring
// multiplication at degree n*d, all over the same coefficient arithmetic
// and modulus. Fits the scaling exponent of time against n. The single-
// thread loop keeps timings stable.
inline BenchReport bench_compare(std::span<const std::size_t> n_list,
                                 std::size_t d, std::size_t reps,
                                 SamplerState& state) {
  if (reps < 5)
    throw InsufficientSamplesError("bench_compare: need at least 5 reps");
  if (n_list.empty())
    throw InsufficientSamplesError("bench_compare: empty n list");
  const std::size_t n_max = *std::max_element(n_list.begin(), n_list.end());
  // one modulus friendly to every degree in play, d through n_max*d
  const u64 q = find_ntt_prime(n_max * d, u64(1) << 30);
  const u64 t = 257;

  BenchReport rep;
  std::vector<std::pair<double, double>> vlwe_pts, rlwe_full_pts;
  for (std::size_t n : n_list) {
    Ring ring(VarietyParams::power_of_two(n, d, q, t, 3.2), NttMode::Require);
    const RingElem a = sample_uniform_elem(ring.params(), state);
    const RingElem b = sample_uniform_elem(ring.params(), state);
    const NttTables coord_tab = NttTables::build(d, q);
    const NttTables full_tab = NttTables::build(n * d, q);
    std::vector<u64> fa(n * d), fb(n * d);
    for (auto& c : fa) c = state.uniform_below(q);
    for (auto& c : fb) c = state.uniform_below(q);

    const double vlwe_ns = detail::median_op_ns(reps, [&] {
      volatile u64 sink = ring.mul(a, b).coords[0][0];
      (void)sink;
    });
    const double rlwe_coord_ns = detail::median_op_ns(reps, [&] {
      u64 acc = 0;
      for (std::size_t i = 0; i < n; ++i)
        acc ^= coord_tab.negacyclic_mul(a.coords[i], b.coords[i])[0];
      volatile u64 sink = acc;
      (void)sink;
    });
    const double rlwe_full_ns = detail::median_op_ns(reps, [&] {
      volatile u64 sink = full_tab.negacyclic_mul(fa, fb)[0];
      (void)sink;
    });

    auto tag = [&](const std::string& kind) {
      std::ostringstream s;
      s << kind << " n=" << n << " d=" << d;
      return s.str();
    };
    rep.rows.push_back({tag("vlwe-mul"), n, vlwe_ns});
    rep.rows.push_back({tag("rlwe-coords"), n, rlwe_coord_ns});
    rep.rows.push_back(
        {"rlwe-full N=" + std::to_string(n * d), n, rlwe_full_ns});
    vlwe_pts.emplace_back(static_cast<double>(n), vlwe_ns);
    rlwe_full_pts.emplace_back(static_cast<double>(n), rlwe_full_ns);
  }
  if (n_list.size() >= 2) {
    rep.vlwe_exponent = detail::fit_log_slope(vlwe_pts);
    rep.rlwe_full_exponent = detail::fit_log_slope(rlwe_full_pts);
  }
  return rep;
}

// Error-growth comparison (report-only): per-coordinate noise after one
// reference-style multiplication at degree d versus one RLWE multiplication
// over the full degree-(n*d) ring; all coordinates of the VLWE side should
// look alike while the RLWE side reflects the larger convolution.
inline std::vector<NoiseGrowthRow> error_growth_compare(std::size_t n,
                                                        std::size_t d,
                                                        std::size_t reps,
                                                        SamplerState& state) {
  if (reps < 5)
    throw InsufficientSamplesError("error_growth_compare: need at least 5 reps");
  const u64 t = 17;
  const u64 q = find_ntt_prime(n * d, u64(1) << 50);
  std::vector<NoiseGrowthRow> rows;

  auto measure = [&](std::size_t deg, const std::string& label) {
    NegacyclicBfv core(deg, q, t, 3.2);
    const DiscreteGaussian dg(3.2);
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      NegacyclicBfv::Poly s = core.gaussian(dg, state);
      NegacyclicBfv::Poly m1(deg, 0), m2(deg, 0);
      for (auto& c : m1) c = state.uniform_below(t);
      for (auto& c : m2) c = state.uniform_below(t);
      auto ks = core.ks_keygen(s, state);
      auto prod = core.mul_ct(core.enc_sym(s, m1, state),
                              core.enc_sym(s, m2, state), ks);
      // residual against Delta * (m1 m2 mod (x^deg+1, t)); coefficients of
      // the integer product stay far below q, so the mod-q result lifts
      // exactly and reduces mod t
      auto m1m2 = core.tables().negacyclic_mul(m1, m2);
      for (auto& c : m1m2) c = from_centered(center(c, q), t);
      const auto w = core.dec_raw(s, prod);
      const auto expected = core.scale_coeffs(m1m2, core.delta());
      for (std::size_t k = 0; k < deg; ++k) {
        const double diff = static_cast<double>(
            center(sub_mod(w[k], expected[k], q), q));
        sum_sq += diff * diff;
        ++count;
      }
    }
    rows.push_back({label, std::sqrt(sum_sq / static_cast<double>(count))});
  };

  for (std::size_t i = 0; i < n; ++i)
    measure(d, "vlwe-coord-" + std::to_string(i) + " d=" + std::to_string(d));
  measure(n * d, "rlwe-full N=" + std::to_string(n * d));
  return rows;
}

} // namespace vlwe
