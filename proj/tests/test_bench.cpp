#include "vlwe/bench.hpp"

#include <gtest/gtest.h>

using namespace vlwe;

TEST(Bench, RejectsTooFewReps) {
  SamplerState st = SamplerState::from_seed64(1);
  const std::vector<std::size_t> ns{1, 2};
  EXPECT_THROW(bench_compare(ns, 16, 4, st), InsufficientSamplesError);
  EXPECT_THROW(bench_compare(std::vector<std::size_t>{}, 16, 5, st),
               InsufficientSamplesError);
  EXPECT_THROW(error_growth_compare(2, 16, 4, st), InsufficientSamplesError);
}

TEST(Bench, SmokeRun) {
  SamplerState st = SamplerState::from_seed64(2);
  const std::vector<std::size_t> ns{1, 2, 4};
  const BenchReport rep = bench_compare(ns, 16, 5, st);
  ASSERT_EQ(rep.rows.size(), 9u); // three rows per n
  for (const auto& row : rep.rows) {
    EXPECT_GT(row.median_ns, 0.0);
    EXPECT_FALSE(row.config.empty());
  }
  // report structure is deterministic for fixed inputs
  SamplerState st2 = SamplerState::from_seed64(2);
  const BenchReport rep2 = bench_compare(ns, 16, 5, st2);
  ASSERT_EQ(rep2.rows.size(), rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    EXPECT_EQ(rep2.rows[i].config, rep.rows[i].config);
  const std::string tsv = rep.to_tsv();
  EXPECT_NE(tsv.find("config\tmedian_ns"), std::string::npos);
  EXPECT_NE(tsv.find("vlwe_exponent="), std::string::npos);
}

TEST(Bench, ErrorGrowthRows) {
  SamplerState st = SamplerState::from_seed64(3);
  const auto rows = error_growth_compare(2, 16, 5, st);
  ASSERT_EQ(rows.size(), 3u); // two coordinates plus the full-ring row
  for (const auto& row : rows) EXPECT_GT(row.measured_sd, 0.0);
  // the full-ring multiplication convolves more terms, so its noise
  // exceeds any single coordinate's
  EXPECT_GT(rows[2].measured_sd, rows[0].measured_sd);
}
