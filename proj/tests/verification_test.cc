//
// Copyright 2026 The dpcalib Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpcalib/verification.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace dpcalib {
namespace {

using ::testing::HasSubstr;

PrivacyLevel Level(double lambda) { return *PrivacyLevel::Create(lambda); }
ReferenceCount Ref(double c) { return *ReferenceCount::Create(c); }

TEST(EmpiricalCoverageTest, WorkedExample) {
  const CoverageReport report =
      *EmpiricalCoverage(Level(0.080472), 0.2, Ref(100), 200000, 7);
  EXPECT_EQ(report.n_trials, 200000);
  EXPECT_NEAR(report.target_p, 0.8, 1e-6);
  EXPECT_NEAR(report.empirical_p, 0.8, 0.005);
  EXPECT_NEAR(report.standard_error, std::sqrt(0.8 * 0.2 / 200000), 1e-8);
  EXPECT_TRUE(report.pass);
}

TEST(EmpiricalCoverageTest, HalfCoverageForAnySplit) {
  const double ln2 = std::log(2.0);
  struct Split {
    double lambda, w, c;
  };
  for (const Split& s : {Split{ln2, 1, 1}, Split{ln2 / 50, 0.5, 100},
                         Split{ln2 / 2000, 0.1, 20000}}) {
    const CoverageReport report =
        *EmpiricalCoverage(Level(s.lambda), s.w, Ref(s.c), 100000, 3);
    EXPECT_NEAR(report.target_p, 0.5, 1e-15);
    EXPECT_NEAR(report.empirical_p, 0.5, 0.006);
    EXPECT_TRUE(report.pass);
  }
}

TEST(EmpiricalCoverageTest, SaturatesAtLargeProduct) {
  const CoverageReport report =
      *EmpiricalCoverage(Level(0.1), 1.0, Ref(100), 1000, 5);
  EXPECT_GT(report.empirical_p, 0.995);
  EXPECT_TRUE(report.pass);
}

TEST(EmpiricalCoverageTest, GridAllPass) {
  for (double product : {0.1, 0.5, 1.0, 1.6, 3.0}) {
    const CoverageReport report = *EmpiricalCoverage(
        Level(product / 20), 0.2, Ref(100), 200000, DeriveSeed(99, product * 10));
    EXPECT_TRUE(report.pass) << product << ": " << ToJson(report);
    EXPECT_NEAR(report.target_p, -std::expm1(-product), 1e-15);
  }
}

TEST(EmpiricalCoverageTest, IndependentOfWorkerCount) {
  const CoverageReport one =
      *EmpiricalCoverage(Level(0.05), 0.2, Ref(100), 300001, 11, 1);
  for (int workers : {2, 3, 8}) {
    const CoverageReport many =
        *EmpiricalCoverage(Level(0.05), 0.2, Ref(100), 300001, 11, workers);
    EXPECT_EQ(ToJson(one), ToJson(many)) << workers;
  }
}

TEST(EmpiricalCoverageTest, ReproducibleUnderSeed) {
  const auto a = *EmpiricalCoverage(Level(0.05), 0.2, Ref(100), 5000, 1);
  const auto b = *EmpiricalCoverage(Level(0.05), 0.2, Ref(100), 5000, 1);
  const auto c = *EmpiricalCoverage(Level(0.05), 0.2, Ref(100), 5000, 2);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_NE(a.hits, c.hits);
}

TEST(EmpiricalCoverageTest, Preconditions) {
  EXPECT_THAT(
      EmpiricalCoverage(Level(1), 0.2, Ref(10), 999, 1).status().message(),
      HasSubstr("at least 1000"));
  EXPECT_FALSE(EmpiricalCoverage(Level(1), 0, Ref(10), 1000, 1).ok());
}

TEST(DistinguishabilityTest, AdjacentCountsExample) {
  const RatioReport report = *Distinguishability(10, 0.01, 12);
  EXPECT_NEAR(report.observed_ratio, std::exp(-0.01), 1e-12);
  EXPECT_NEAR(report.observed_ratio, 0.99005, 1e-5);
  EXPECT_EQ(report.lower_bound, std::exp(-0.01));
  EXPECT_EQ(report.upper_bound, std::exp(0.01));
  EXPECT_NEAR(report.upper_bound, 1.01005, 1e-5);
  EXPECT_TRUE(report.pass);
}

TEST(DistinguishabilityTest, MidpointIsIndistinguishable) {
  EXPECT_EQ(Distinguishability(10, 0.7, 10.5)->observed_ratio, 1.0);
}

TEST(DistinguishabilityTest, SweepAlwaysWithinBounds) {
  for (double eps : {0.01, 0.1, 1.0, 5.0}) {
    for (double response = 5; response <= 16; response += 0.05) {
      const RatioReport report = *Distinguishability(10, eps, response);
      ASSERT_TRUE(report.pass) << eps << " " << response;
    }
  }
}

TEST(DistinguishabilityTest, RejectsBadEpsilon) {
  EXPECT_FALSE(Distinguishability(10, 0, 12).ok());
  EXPECT_FALSE(Distinguishability(10, -1, 12).ok());
}

TEST(EmpiricalDensityRatioTest, HistogramRespectsBound) {
  const DensityRatioReport report =
      *EmpiricalDensityRatio(Level(0.5), 1000000, 0.25, 17);
  EXPECT_EQ(report.outcome, HistogramOutcome::kPass) << ToJson(report);
  EXPECT_GT(report.bins_used, 50);
  EXPECT_LE(report.max_standard_error, 0.2);
  EXPECT_LE(report.max_deviation, 3 * report.max_standard_error);
}

TEST(EmpiricalDensityRatioTest, ZeroShiftGivesUnitRatios) {
  const double lambda = 0.5;
  const DensityRatioReport report =
      *EmpiricalDensityRatio(Level(lambda), 1000000, 0.25, 17, 0.0);
  EXPECT_EQ(report.outcome, HistogramOutcome::kPass);
  EXPECT_LT(report.max_deviation, -lambda + 3 * report.max_standard_error);
  EXPECT_GT(report.max_deviation, -lambda);
}

TEST(EmpiricalDensityRatioTest, SparseTailsAreExcluded) {
  const DensityRatioReport report =
      *EmpiricalDensityRatio(Level(2.0), 100000, 0.25, 4);
  EXPECT_NE(report.outcome, HistogramOutcome::kFail);
  EXPECT_LT(report.bins_used, report.bins_occupied);
  // Expected count n * P(bin) drops below 100 past |x| ~ 3.
  EXPECT_LE(report.bins_used, 30);
}

TEST(EmpiricalDensityRatioTest, TooFewBinsIsInconclusive) {
  const DensityRatioReport report =
      *EmpiricalDensityRatio(Level(100.0), 100000, 0.5, 4);
  EXPECT_EQ(report.outcome, HistogramOutcome::kInconclusive);
  EXPECT_LT(report.bins_used, kMinOccupiedBins);
}

TEST(EmpiricalDensityRatioTest, ReproducibleUnderSeed) {
  EXPECT_EQ(ToJson(*EmpiricalDensityRatio(Level(1.0), 200000, 0.25, 8)),
            ToJson(*EmpiricalDensityRatio(Level(1.0), 200000, 0.25, 8)));
}

TEST(EmpiricalDensityRatioTest, Preconditions) {
  EXPECT_FALSE(EmpiricalDensityRatio(Level(1), 99999, 0.25, 1).ok());
  EXPECT_FALSE(EmpiricalDensityRatio(Level(1), 100000, 0.6, 1).ok());
  EXPECT_FALSE(EmpiricalDensityRatio(Level(1), 100000, 0, 1).ok());
  EXPECT_FALSE(EmpiricalDensityRatio(Level(1), 100000, 0.25, 1, 2.0).ok());
}

TEST(KolmogorovSmirnovTest, HandComputed) {
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const std::vector<double> one = {0.5};
  EXPECT_DOUBLE_EQ(KolmogorovSmirnovStatistic(one, uniform), 0.5);
  const std::vector<double> grid = {0.9, 0.1, 0.3, 0.7, 0.5};
  // Empirical steps at 0.1..0.9 against F(x) = x: sup gap is 0.1.
  EXPECT_NEAR(KolmogorovSmirnovStatistic(grid, uniform), 0.1, 1e-15);
}

TEST(KolmogorovSmirnovTest, CriticalValue) {
  EXPECT_NEAR(KolmogorovSmirnovCriticalValue(1, 0.001), 1.9494746035204052, 1e-14);
  EXPECT_NEAR(KolmogorovSmirnovCriticalValue(100000, 0.001),
              1.9494746035204052 / std::sqrt(100000.0), 1e-15);
}

TEST(SamplerFidelityTest, PassesForCorrectDistribution) {
  const SamplerReport report = *SamplerFidelity(Level(0.1), 100000, 8);
  EXPECT_TRUE(report.pass) << ToJson(report);
  EXPECT_LT(report.ks_statistic, report.ks_critical_value);
  EXPECT_NEAR(report.variance / report.expected_variance, 1.0, 0.02);
}

TEST(SamplerFidelityTest, KsDetectsWrongScale) {
  SeededUniform uniform(8);
  const LaplaceDistribution sampled(Level(0.1));
  const LaplaceDistribution claimed(Level(0.11));
  std::vector<double> xs(100000);
  for (double& x : xs) x = sampled.Sample(uniform);
  EXPECT_GT(KolmogorovSmirnovStatistic(
                xs, [&](double x) { return *claimed.Cdf(x); }),
            KolmogorovSmirnovCriticalValue(100000, 0.001));
}

TEST(ReportJsonTest, Fields) {
  const auto coverage = nlohmann::json::parse(
      ToJson(*EmpiricalCoverage(Level(0.08), 0.2, Ref(100), 1000, 1)));
  for (const char* key : {"n_trials", "hits", "target_p", "empirical_p",
                          "standard_error", "pass"}) {
    EXPECT_TRUE(coverage.contains(key)) << key;
  }
  const auto ratio =
      nlohmann::json::parse(ToJson(*Distinguishability(10, 0.01, 12)));
  EXPECT_EQ(ratio["pass"], true);
  EXPECT_EQ(ratio["lower_bound"], std::exp(-0.01));
  const auto histogram = nlohmann::json::parse(
      ToJson(*EmpiricalDensityRatio(Level(100.0), 100000, 0.5, 4)));
  EXPECT_EQ(histogram["outcome"], "inconclusive");
}

}  // namespace
}  // namespace dpcalib
