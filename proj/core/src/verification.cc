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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpcalib/random.h"
#include "nlohmann/json.hpp"

namespace dpcalib {
namespace {

constexpr int64_t kTrialsPerBlock = int64_t{1} << 16;

int64_t CountHitsInBlock(const LaplaceDistribution& noise, double radius,
                         int64_t trials, uint64_t seed) {
  SeededUniform uniform(seed);
  int64_t hits = 0;
  for (int64_t i = 0; i < trials; ++i) {
    if (std::fabs(noise.Sample(uniform)) < radius) ++hits;
  }
  return hits;
}

const char* OutcomeName(HistogramOutcome outcome) {
  switch (outcome) {
    case HistogramOutcome::kPass: return "pass";
    case HistogramOutcome::kFail: return "fail";
    case HistogramOutcome::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace

absl::StatusOr<CoverageReport> EmpiricalCoverage(
    PrivacyLevel level, double half_width_w, const ReferenceCount& reference,
    int64_t n_trials, uint64_t seed, int workers) {
  if (n_trials < kMinCoverageTrials) {
    return absl::InvalidArgumentError(absl::StrCat(
        "coverage needs at least ", kMinCoverageTrials, " trials, got ",
        n_trials));
  }
  absl::StatusOr<double> target = CoverageFor(level, half_width_w, reference);
  if (!target.ok()) return target.status();

  const LaplaceDistribution noise(level);
  const double radius = half_width_w * reference.value();
  const int64_t blocks = (n_trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<int64_t> block_hits(blocks, 0);
  auto run_block = [&](int64_t b) {
    const int64_t trials =
        std::min(kTrialsPerBlock, n_trials - b * kTrialsPerBlock);
    block_hits[b] = CountHitsInBlock(noise, radius, trials, DeriveSeed(seed, b));
  };

  workers = std::clamp<int64_t>(workers, 1, blocks);
  if (workers == 1) {
    for (int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<int64_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int64_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }

  CoverageReport report;
  report.n_trials = n_trials;
  for (int64_t h : block_hits) report.hits += h;
  report.target_p = *target;
  report.empirical_p =
      static_cast<double>(report.hits) / static_cast<double>(n_trials);
  report.standard_error = std::sqrt(report.target_p * (1 - report.target_p) /
                                    static_cast<double>(n_trials));
  report.pass = std::fabs(report.empirical_p - report.target_p) <=
                kCoverageSigmas * report.standard_error + kCoverageSlack;
  return report;
}

absl::StatusOr<RatioReport> Distinguishability(int64_t c_low, double epsilon,
                                               double response) {
  absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(epsilon);
  if (!level.ok()) return level.status();
  // pdf(response - c_low) / pdf(response - c_low - 1).
  absl::StatusOr<double> ratio = LaplaceDistribution(*level).DensityRatio(
      -1.0, response - static_cast<double>(c_low));
  if (!ratio.ok()) return ratio.status();

  RatioReport report;
  report.epsilon = epsilon;
  report.observed_ratio = *ratio;
  report.lower_bound = std::exp(-epsilon);
  report.upper_bound = std::exp(epsilon);
  report.pass = report.observed_ratio >=
                    report.lower_bound * (1 - kRatioTolerance) &&
                report.observed_ratio <=
                    report.upper_bound * (1 + kRatioTolerance);
  return report;
}

absl::StatusOr<DensityRatioReport> EmpiricalDensityRatio(PrivacyLevel level,
                                                         int64_t n_samples,
                                                         double bin_width,
                                                         uint64_t seed,
                                                         double shift) {
  if (n_samples < kMinHistogramSamples) {
    return absl::InvalidArgumentError(absl::StrCat(
        "histogram check needs at least ", kMinHistogramSamples,
        " samples, got ", n_samples));
  }
  if (!(bin_width > 0.0 && bin_width <= kMaxBinWidth)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bin width must lie in (0, ", kMaxBinWidth, "], got ", bin_width));
  }
  if (!std::isfinite(shift) || std::fabs(shift) > 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("shift must lie in [-1, 1], got ", shift));
  }

  const LaplaceDistribution noise(level);
  // bin -> (count of N, count of N + shift)
  std::map<int64_t, std::pair<int64_t, int64_t>> bins;
  SeededUniform base_stream(DeriveSeed(seed, 0));
  SeededUniform shifted_stream(DeriveSeed(seed, 1));
  for (int64_t i = 0; i < n_samples; ++i) {
    const double base = noise.Sample(base_stream);
    const double shifted = noise.Sample(shifted_stream) + shift;
    ++bins[static_cast<int64_t>(std::floor(base / bin_width))].first;
    ++bins[static_cast<int64_t>(std::floor(shifted / bin_width))].second;
  }

  DensityRatioReport report;
  report.epsilon = level.epsilon();
  report.shift = shift;
  report.max_deviation = -std::numeric_limits<double>::infinity();
  report.bins_occupied = static_cast<int>(bins.size());
  for (const auto& [bin, counts] : bins) {
    const auto [a, b] = counts;
    if (a < kMinBinCount || b < kMinBinCount) continue;
    ++report.bins_used;
    const double log_ratio = std::log(static_cast<double>(a) / b);
    report.max_deviation =
        std::max(report.max_deviation, std::fabs(log_ratio) - level.epsilon());
    report.max_standard_error =
        std::max(report.max_standard_error, std::sqrt(1.0 / a + 1.0 / b));
  }
  if (report.bins_used < kMinOccupiedBins) {
    report.outcome = HistogramOutcome::kInconclusive;
    if (report.bins_used == 0) report.max_deviation = 0;
    return report;
  }
  report.outcome = report.max_deviation <= 3.0 * report.max_standard_error
                       ? HistogramOutcome::kPass
                       : HistogramOutcome::kFail;
  return report;
}

double KolmogorovSmirnovStatistic(std::span<const double> samples,
                                  const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double statistic = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    statistic = std::max({statistic, (i + 1) / n - f, f - i / n});
  }
  return statistic;
}

double KolmogorovSmirnovCriticalValue(int64_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2)) /
         std::sqrt(static_cast<double>(n));
}

absl::StatusOr<SamplerReport> SamplerFidelity(PrivacyLevel level,
                                              int64_t n_samples, uint64_t seed,
                                              double variance_tolerance) {
  if (n_samples < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 samples, got ", n_samples));
  }
  const LaplaceDistribution noise(level);
  SeededUniform uniform(seed);
  std::vector<double> samples(n_samples);
  for (double& x : samples) x = noise.Sample(uniform);

  SamplerReport report;
  report.n_samples = n_samples;
  report.ks_statistic = KolmogorovSmirnovStatistic(
      samples, [&](double x) { return *noise.Cdf(x); });
  report.ks_critical_value = KolmogorovSmirnovCriticalValue(n_samples, 0.001);
  double sum = 0;
  for (double x : samples) sum += x;
  report.mean = sum / n_samples;
  double squares = 0;
  for (double x : samples) squares += (x - report.mean) * (x - report.mean);
  report.variance = squares / (n_samples - 1);
  report.expected_variance = 2.0 / (level.lambda() * level.lambda());
  report.pass = report.ks_statistic < report.ks_critical_value &&
                std::fabs(report.variance / report.expected_variance - 1) <=
                    variance_tolerance;
  return report;
}

std::string ToJson(const CoverageReport& report) {
  nlohmann::ordered_json json;
  json["n_trials"] = report.n_trials;
  json["hits"] = report.hits;
  json["target_p"] = report.target_p;
  json["empirical_p"] = report.empirical_p;
  json["standard_error"] = report.standard_error;
  json["pass"] = report.pass;
  return json.dump();
}

std::string ToJson(const RatioReport& report) {
  nlohmann::ordered_json json;
  json["epsilon"] = report.epsilon;
  json["observed_ratio"] = report.observed_ratio;
  json["lower_bound"] = report.lower_bound;
  json["upper_bound"] = report.upper_bound;
  json["pass"] = report.pass;
  return json.dump();
}

std::string ToJson(const DensityRatioReport& report) {
  nlohmann::ordered_json json;
  json["outcome"] = OutcomeName(report.outcome);
  json["epsilon"] = report.epsilon;
  json["shift"] = report.shift;
  json["bins_occupied"] = report.bins_occupied;
  json["bins_used"] = report.bins_used;
  json["max_deviation"] = report.max_deviation;
  json["max_standard_error"] = report.max_standard_error;
  return json.dump();
}

std::string ToJson(const SamplerReport& report) {
  nlohmann::ordered_json json;
  json["n_samples"] = report.n_samples;
  json["ks_statistic"] = report.ks_statistic;
  json["ks_critical_value"] = report.ks_critical_value;
  json["mean"] = report.mean;
  json["variance"] = report.variance;
  json["expected_variance"] = report.expected_variance;
  json["pass"] = report.pass;
  return json.dump();
}

}  // namespace dpcalib
