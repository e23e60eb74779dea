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

#ifndef DPCALIB_VERIFICATION_H_
#define DPCALIB_VERIFICATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "dpcalib/calibration.h"
#include "dpcalib/laplace.h"

namespace dpcalib {

// Pass bands for Monte Carlo checks: 3 binomial standard errors plus a fixed
// absolute slack.
inline constexpr double kCoverageSigmas = 3.0;
inline constexpr double kCoverageSlack = 0.002;
inline constexpr int64_t kMinCoverageTrials = 1000;

// Analytic bound comparisons allow this relative tolerance.
inline constexpr double kRatioTolerance = 1e-12;

// Histogram bins need this many counts in both histograms to be used.
inline constexpr int64_t kMinBinCount = 100;
inline constexpr int kMinOccupiedBins = 10;
inline constexpr int64_t kMinHistogramSamples = 100000;
inline constexpr double kMaxBinWidth = 0.5;

struct CoverageReport {
  int64_t n_trials = 0;
  int64_t hits = 0;
  double target_p = 0;
  double empirical_p = 0;
  double standard_error = 0;
  bool pass = false;
};

// Draws n_trials Laplace samples and counts |N| < w c, comparing the hit rate
// with 1 - exp(-lambda w c).
//
// Trials are split into fixed-size blocks, each with its own seed derived
// from `seed`, so the report is identical for any number of workers.
absl::StatusOr<CoverageReport> EmpiricalCoverage(
    PrivacyLevel level, double half_width_w, const ReferenceCount& reference,
    int64_t n_trials, uint64_t seed, int workers = 1);

struct RatioReport {
  double epsilon = 0;
  double observed_ratio = 0;
  double lower_bound = 0;
  double upper_bound = 0;
  bool pass = false;
};

// Likelihood ratio of observing `response` under count c_low versus
// c_low + 1, checked against [exp(-epsilon), exp(epsilon)].
absl::StatusOr<RatioReport> Distinguishability(int64_t c_low, double epsilon,
                                               double response);

enum class HistogramOutcome { kPass, kFail, kInconclusive };

struct DensityRatioReport {
  HistogramOutcome outcome = HistogramOutcome::kInconclusive;
  double epsilon = 0;
  double shift = 0;
  // Bins holding any sample, and those meeting kMinBinCount in both
  // histograms.
  int bins_occupied = 0;
  int bins_used = 0;
  // max over used bins of |log(count_N / count_{N+shift})| - epsilon.
  double max_deviation = 0;
  // Largest per-bin standard error of the log ratio, sqrt(1/a + 1/b).
  double max_standard_error = 0;
};

// Histograms n_samples draws of N and, independently, of N + shift on a
// shared binning and compares bin-wise log ratios with epsilon. Passes when
// max_deviation <= 3 * max_standard_error. Fewer than kMinOccupiedBins usable
// bins gives kInconclusive rather than kFail.
absl::StatusOr<DensityRatioReport> EmpiricalDensityRatio(PrivacyLevel level,
                                                         int64_t n_samples,
                                                         double bin_width,
                                                         uint64_t seed,
                                                         double shift = 1.0);

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double KolmogorovSmirnovStatistic(std::span<const double> samples,
                                  const std::function<double(double)>& cdf);

// Asymptotic critical value sqrt(-ln(alpha / 2) / 2) / sqrt(n).
double KolmogorovSmirnovCriticalValue(int64_t n, double alpha);

struct SamplerReport {
  int64_t n_samples = 0;
  double ks_statistic = 0;
  double ks_critical_value = 0;
  double mean = 0;
  double variance = 0;
  double expected_variance = 0;
  bool pass = false;
};

// KS test at alpha = 0.001 plus sample variance against 2 / lambda^2 within
// `variance_tolerance` relative.
absl::StatusOr<SamplerReport> SamplerFidelity(PrivacyLevel level,
                                              int64_t n_samples, uint64_t seed,
                                              double variance_tolerance = 0.02);

std::string ToJson(const CoverageReport& report);
std::string ToJson(const RatioReport& report);
std::string ToJson(const DensityRatioReport& report);
std::string ToJson(const SamplerReport& report);

}  // namespace dpcalib

#endif  // DPCALIB_VERIFICATION_H_
