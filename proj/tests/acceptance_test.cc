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

// Runs the nine acceptance criteria and prints one line per criterion.
// Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "absl/numeric/int128.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dpcalib/budget_ledger.h"
#include "dpcalib/calibration.h"
#include "dpcalib/dataset.h"
#include "dpcalib/laplace.h"
#include "dpcalib/predicate.h"
#include "dpcalib/query_engine.h"
#include "dpcalib/random.h"
#include "dpcalib/verification.h"

namespace dpcalib {
namespace {

constexpr uint64_t kSeed = 20260415;
constexpr double kRoundedLambda = 0.080472;

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome Fail(const absl::Status& status) { return {false, status.ToString()}; }

PrivacyLevel Level(double lambda) { return *PrivacyLevel::Create(lambda); }

Outcome EpsilonForWorkedExample() {
  auto spec = ConfidenceSpec::Create(0.2, 0.8);
  auto ref = ReferenceCount::Create(100);
  if (!spec.ok()) return Fail(spec.status());
  if (!ref.ok()) return Fail(ref.status());
  auto level = EpsilonFor(*spec, *ref);
  if (!level.ok()) return Fail(level.status());
  const double expected = -std::log(0.2) / 20;
  const double diff = std::abs(level->epsilon() - expected);
  return {diff <= 1e-9,
          absl::StrFormat("epsilon=%.17g expected=%.17g |diff|=%.3g",
                          level->epsilon(), expected, diff)};
}

Outcome DistinguishabilityExample() {
  auto report = Distinguishability(10, 0.01, 12);
  if (!report.ok()) return Fail(report.status());
  const double diff = std::abs(report->observed_ratio - std::exp(-0.01));
  return {diff <= 1e-12 && report->pass,
          absl::StrFormat("ratio=%.17g e^-0.01=%.17g |diff|=%.3g",
                          report->observed_ratio, std::exp(-0.01), diff)};
}

Outcome PointwiseDensityRatio() {
  double worst = 0;
  for (double lambda : {0.01, 0.1, 1.0}) {
    const LaplaceDistribution d(Level(lambda));
    for (double x : {0.5, 1.0, 5.0, 50.0}) {
      auto here = d.Pdf(x);
      auto next = d.Pdf(x + 1);
      if (!here.ok()) return Fail(here.status());
      if (!next.ok()) return Fail(next.status());
      const double expected = std::exp(lambda);
      worst = std::max(worst, std::abs(*here / *next - expected) / expected);
    }
  }
  return {worst <= 1e-12,
          absl::StrFormat("12 points, max relative error %.3g", worst)};
}

Outcome CoverageAtWorkedExample() {
  auto coverage = EmpiricalCoverage(Level(kRoundedLambda), 0.2,
                                    *ReferenceCount::Create(100), 200000, kSeed);
  if (!coverage.ok()) return Fail(coverage.status());
  return {std::abs(coverage->empirical_p - 0.8) <= 0.005,
          absl::StrFormat("empirical p=%.5f over %d trials (seed %d)",
                          coverage->empirical_p, coverage->n_trials, kSeed)};
}

Outcome CalibrationRoundTrip() {
  double worst = 0;
  int cells = 0;
  for (double w : {0.05, 0.2, 0.5}) {
    for (double p : {0.5, 0.8, 0.9, 0.95, 0.99}) {
      for (double c : {1.0, 10.0, 50.0, 100.0, 500.0, 1000.0, 10000.0}) {
        auto spec = ConfidenceSpec::Create(w, p);
        auto ref = ReferenceCount::Create(c);
        if (!spec.ok()) return Fail(spec.status());
        if (!ref.ok()) return Fail(ref.status());
        auto level = EpsilonFor(*spec, *ref);
        if (!level.ok()) return Fail(level.status());
        auto back = CoverageFor(*level, w, *ref);
        if (!back.ok()) return Fail(back.status());
        worst = std::max(worst, std::abs(*back - p));
        ++cells;
      }
    }
  }
  return {worst <= 1e-9,
          absl::StrFormat("%d cells, max |p' - p| = %.3g", cells, worst)};
}

Outcome HyperbolaShape() {
  auto spec = ConfidenceSpec::Create(0.2, 0.8);
  auto grid = LogSpacedGrid(1, 10000, kDefaultGridPoints);
  if (!spec.ok()) return Fail(spec.status());
  if (!grid.ok()) return Fail(grid.status());
  auto series = EpsilonVsTrueValue(*spec, *grid);
  if (!series.ok()) return Fail(series.status());
  const double constant = series->points.front().first *
                          series->points.front().second;
  double worst = 0;
  for (const auto& [c, eps] : series->points) {
    worst = std::max(worst, std::abs(c * eps - constant) / constant);
  }
  return {series->points.size() == 100 && worst <= 1e-12,
          absl::StrFormat("%d points, c*eps=%.17g, max relative spread %.3g",
                          series->points.size(), constant, worst)};
}

Outcome HalfWidthScaling() {
  auto ref = ReferenceCount::Create(100);
  if (!ref.ok()) return Fail(ref.status());
  auto wide = HalfWidthFor(Level(0.04), 0.8, *ref);
  auto narrow = HalfWidthFor(Level(0.08), 0.8, *ref);
  if (!wide.ok()) return Fail(wide.status());
  if (!narrow.ok()) return Fail(narrow.status());
  const double diff = std::abs(*wide - 2 * *narrow);
  return {diff <= 1e-12 * *wide,
          absl::StrFormat("w(0.04)=%.17g 2*w(0.08)=%.17g", *wide,
                          2 * *narrow)};
}

Outcome SamplerFidelityCheck() {
  auto report = SamplerFidelity(Level(0.1), 100000, DeriveSeed(kSeed, 8));
  if (!report.ok()) return Fail(report.status());
  const double var_err =
      std::abs(report->variance - report->expected_variance) /
      report->expected_variance;
  return {report->ks_statistic < report->ks_critical_value && var_err <= 0.02,
          absl::StrFormat("KS=%.5f critical=%.5f variance error %.4f",
                          report->ks_statistic, report->ks_critical_value,
                          var_err)};
}

Outcome EndToEndCoverage() {
  auto dataset = IngestFile(DPCALIB_FIXTURE_DIR "/people.csv", DatasetFormat::kCsv);
  if (!dataset.ok()) return Fail(dataset.status());
  auto predicate = ParsePredicate("city = Rome");
  if (!predicate.ok()) return Fail(predicate.status());
  auto truth = TrueCount(*dataset, *predicate);
  if (!truth.ok()) return Fail(truth.status());
  auto spec = ConfidenceSpec::Create(0.2, 0.8);
  if (!spec.ok()) return Fail(spec.status());
  auto ledger = BudgetLedger::Create(20000);
  if (!ledger.ok()) return Fail(ledger.status());

  constexpr int kRuns = 200000;
  SeededUniform sampler(DeriveSeed(kSeed, 9));
  const double radius = 0.2 * static_cast<double>(*truth);
  int hits = 0;
  absl::uint128 expected_units = 0;
  for (int i = 0; i < kRuns; ++i) {
    auto response =
        CalibratedNoisyCount(*dataset, *predicate, *spec, sampler, **ledger);
    if (!response.ok()) return Fail(response.status());
    expected_units += BudgetLedger::ChargeUnits(response->epsilon_charged);
    if (std::abs(response->noisy_value - static_cast<double>(*truth)) <=
        radius) {
      ++hits;
    }
  }
  const double frequency = static_cast<double>(hits) / kRuns;
  const BudgetLedger& l = **ledger;
  const bool reconciled = l.Entries().size() == static_cast<size_t>(kRuns) &&
                          l.spent_units() == expected_units &&
                          l.spent_units() <= l.total_units();
  return {*truth == 100 && std::abs(frequency - 0.8) <= 0.005 && reconciled,
          absl::StrFormat("true count %d, frequency %.5f over %d releases, "
                          "spent %.6f of %.0f, ledger %s",
                          static_cast<int64_t>(*truth), frequency, kRuns, l.Spent(),
                          l.total_budget(),
                          reconciled ? "reconciles" : "does not reconcile")};
}

}  // namespace
}  // namespace dpcalib

int main() {
  using dpcalib::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria =
      {
          {"epsilon for w=0.2 p=0.8 c=100", dpcalib::EpsilonForWorkedExample},
          {"distinguishability of 10 vs 11 at 12",
           dpcalib::DistinguishabilityExample},
          {"pointwise density ratio equals e^lambda",
           dpcalib::PointwiseDensityRatio},
          {"empirical coverage at lambda=0.080472",
           dpcalib::CoverageAtWorkedExample},
          {"epsilon/coverage round trip on 3x5x7 grid",
           dpcalib::CalibrationRoundTrip},
          {"epsilon vs true value is a hyperbola", dpcalib::HyperbolaShape},
          {"halving lambda doubles the half-width", dpcalib::HalfWidthScaling},
          {"sampler KS and variance", dpcalib::SamplerFidelityCheck},
          {"end-to-end calibrated counts and ledger",
           dpcalib::EndToEndCoverage},
      };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome outcome = criteria[i].second();
    if (!outcome.pass) ++failures;
    std::printf("[%s] AC%zu %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, outcome.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
