#include "vlwe/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace vlwe;

TEST(Sampler, Determinism) {
  SamplerState a = SamplerState::from_seed64(0xDEADull);
  SamplerState b = SamplerState::from_seed64(0xDEADull);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  SamplerState c = SamplerState::from_seed64(0xDEAEull);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i)
    all_equal = all_equal && (a.next_u64() == c.next_u64());
  EXPECT_FALSE(all_equal);
}

TEST(Sampler, ForkIndependence) {
  SamplerState parent = SamplerState::from_seed64(7);
  SamplerState c0 = parent.fork(0);
  SamplerState c1 = parent.fork(1);
  SamplerState c0_again = parent.fork(0);
  EXPECT_EQ(c0.next_u64(), c0_again.next_u64());
  bool differs = false;
  for (int i = 0; i < 16 && !differs; ++i)
    differs = c0.next_u64() != c1.next_u64();
  EXPECT_TRUE(differs);
}

TEST(Sampler, GaussianDegenerateWidth) {
  SamplerState st = SamplerState::from_seed64(1);
  for (int i = 0; i < 200; ++i)
    EXPECT_EQ(sample_gaussian_int(1e-12, 6.0, st), 0);
  EXPECT_THROW(sample_gaussian_int(0.0, 6.0, st), DomainError);
  EXPECT_THROW(sample_gaussian_int(-1.0, 6.0, st), DomainError);
  EXPECT_THROW(sample_gaussian_int(1.0, 5.0, st), DomainError);
}

TEST(Sampler, GaussianMoments) {
  // 10^6 draws at sigma = 3.2: mean within the 3 sigma / sqrt(N) CLT
  // envelope, variance within 5% of 10.24
  const double sigma = 3.2;
  const std::size_t n = 1'000'000;
  const DiscreteGaussian dg(sigma);
  SamplerState st = SamplerState::from_seed64(20240801);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(dg.sample(st));
    sum += x;
    sum_sq += x * x;
    ASSERT_LE(std::abs(x), dg.support_bound());
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - mean * mean;
  EXPECT_LT(std::abs(mean), 0.05);
  EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma);
}

TEST(Sampler, GaussianRejectionBranchMoments) {
  // sigma above the table cutoff exercises the rejection sampler
  const double sigma = 25.0;
  const DiscreteGaussian dg(sigma);
  SamplerState st = SamplerState::from_seed64(77);
  const std::size_t n = 200'000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(dg.sample(st));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - mean * mean;
  EXPECT_LT(std::abs(mean), 3.0 * sigma / std::sqrt(static_cast<double>(n)) * 3);
  EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma);
}

TEST(Sampler, GaussianElem) {
  VarietyParams p = VarietyParams::power_of_two(4, 16, 7681, 2, 1.0);
  SamplerState st = SamplerState::from_seed64(3);
  const RingElem z = sample_gaussian_elem(p, 1e-12, st);
  for (const auto& coord : z.coords)
    for (u64 c : coord) EXPECT_EQ(c, 0u);

  // fixed seed reproduces the element exactly
  SamplerState s1 = SamplerState::from_seed64(4);
  SamplerState s2 = SamplerState::from_seed64(4);
  EXPECT_EQ(sample_gaussian_elem(p, 3.2, s1), sample_gaussian_elem(p, 3.2, s2));
}

TEST(Sampler, GaussianCrossCoordinateCovariance) {
  // coefficients across coordinates are independent draws; empirical
  // correlation over 10^5 element draws stays near zero
  VarietyParams p = VarietyParams::power_of_two(2, 2, 7681, 2, 1.0);
  SamplerState st = SamplerState::from_seed64(5);
  const std::size_t n = 100'000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const RingElem e = sample_gaussian_elem(p, 3.2, st);
    const double x = static_cast<double>(center(e.coords[0][0], p.q));
    const double y = static_cast<double>(center(e.coords[1][0], p.q));
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  const double cov = sxy / nn - (sx / nn) * (sy / nn);
  const double vx = sxx / nn - (sx / nn) * (sx / nn);
  const double vy = syy / nn - (sy / nn) * (sy / nn);
  const double rho = cov / std::sqrt(vx * vy);
  EXPECT_LT(std::abs(rho), 0.02);
}

TEST(Sampler, UniformChiSquare) {
  // q = 17, 10^5 draws: chi-square over 16 dof; threshold at p ~ 0.001
  const u64 q = 17;
  SamplerState st = SamplerState::from_seed64(6);
  const std::size_t n = 100'000;
  std::map<u64, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[st.uniform_below(q)];
  const double expected = static_cast<double>(n) / static_cast<double>(q);
  double chi2 = 0.0;
  for (u64 v = 0; v < q; ++v) {
    const double diff = static_cast<double>(counts[v]) - expected;
    chi2 += diff * diff / expected;
  }
  // chi-square(16) 99.9th percentile is about 39.25
  EXPECT_LT(chi2, 39.25);
}

TEST(Sampler, UniformElemInvariants) {
  VarietyParams p = VarietyParams::power_of_two(3, 4, 17, 2, 1.0);
  SamplerState st = SamplerState::from_seed64(8);
  for (int rep = 0; rep < 100; ++rep) {
    const RingElem e = sample_uniform_elem(p, st);
    ASSERT_EQ(e.coords.size(), p.n);
    for (const auto& coord : e.coords) {
      ASSERT_EQ(coord.size(), 4u);
      for (u64 c : coord) ASSERT_LT(c, p.q);
    }
  }
  SamplerState s1 = SamplerState::from_seed64(9);
  SamplerState s2 = SamplerState::from_seed64(9);
  EXPECT_EQ(sample_uniform_elem(p, s1), sample_uniform_elem(p, s2));
}

TEST(Sampler, UniformBelowEdgeCases) {
  SamplerState st = SamplerState::from_seed64(10);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(st.uniform_below(1), 0u);
  EXPECT_THROW(st.uniform_below(0), DomainError);
  // bound near 2^63: rejection path must still terminate and stay in range
  const u64 big = (1ull << 62) + 12345;
  for (int i = 0; i < 100; ++i) EXPECT_LT(st.uniform_below(big), big);
}
