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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpcalib/budget_ledger.h"
#include "dpcalib/calibration.h"
#include "dpcalib/dataset.h"
#include "dpcalib/laplace.h"
#include "dpcalib/predicate.h"
#include "dpcalib/query_engine.h"
#include "dpcalib/random.h"
#include "dpcalib/verification.h"
#include "nlohmann/json.hpp"

namespace dpcalib::cli {
namespace {

using Json = nlohmann::ordered_json;

enum class Format { kJson, kCsv, kTable };

struct Globals {
  std::optional<uint64_t> seed;
  std::string output_format;
};

absl::StatusOr<Format> ResolveFormat(const Globals& globals, Format fallback) {
  if (globals.output_format.empty()) return fallback;
  if (globals.output_format == "json") return Format::kJson;
  if (globals.output_format == "csv") return Format::kCsv;
  if (globals.output_format == "table") return Format::kTable;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown output format '", globals.output_format, "'"));
}

std::string Short(double x) { return absl::StrFormat("%.6g", x); }
std::string Full(double x) { return absl::StrFormat("%.17g", x); }

// Left-aligned columns separated by two spaces.
void PrintTable(std::ostream& out,
                const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
      if (i + 1 < row.size()) {
        absl::StrAppendFormat(&line, "%-*s  ", widths[i], row[i]);
      } else {
        line += row[i];
      }
    }
    out << line << '\n';
  }
}

int Fail(std::ostream& err, int code, absl::string_view message) {
  err << "dpcalib: " << message << '\n';
  return code;
}

int Fail(std::ostream& err, int code, const absl::Status& status) {
  return Fail(err, code, status.message());
}

uint64_t EffectiveSeed(const Globals& globals, std::ostream& err) {
  const uint64_t seed = globals.seed.value_or(EntropySeed());
  err << "seed: " << seed << '\n';
  return seed;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::optional<double> epsilon;
  std::optional<double> w;
  std::optional<double> p;
  std::optional<double> c;
};

constexpr char kCalibrateUsage[] =
    "calibrate needs exactly three of --epsilon, --w, --p, --c, and --c is "
    "always required. Valid combinations:\n"
    "  --w W --p P --c C              solve for epsilon\n"
    "  --epsilon E --p P --c C        solve for the half-width w\n"
    "  --epsilon E --w W --c C        solve for the confidence p";

int RunCalibrate(const CalibrateArgs& args, const Globals& globals,
                 std::ostream& out, std::ostream& err) {
  const int given = args.epsilon.has_value() + args.w.has_value() +
                    args.p.has_value() + args.c.has_value();
  if (!args.c.has_value() || given != 3) {
    return Fail(err, kUsageError, kCalibrateUsage);
  }
  absl::StatusOr<Format> format = ResolveFormat(globals, Format::kTable);
  if (!format.ok()) return Fail(err, kUsageError, format.status());
  absl::StatusOr<ReferenceCount> reference = ReferenceCount::Create(*args.c);
  if (!reference.ok()) return Fail(err, kUsageError, reference.status());

  double epsilon = 0, w = 0, p = 0;
  std::string solved_for;
  if (!args.epsilon.has_value()) {
    absl::StatusOr<ConfidenceSpec> spec = ConfidenceSpec::Create(*args.w, *args.p);
    if (!spec.ok()) return Fail(err, kUsageError, spec.status());
    absl::StatusOr<PrivacyLevel> level = EpsilonFor(*spec, *reference);
    if (!level.ok()) return Fail(err, kUsageError, level.status());
    epsilon = level->epsilon();
    w = *args.w;
    p = *args.p;
    solved_for = "epsilon";
  } else {
    absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(*args.epsilon);
    if (!level.ok()) return Fail(err, kUsageError, level.status());
    epsilon = *args.epsilon;
    if (!args.w.has_value()) {
      absl::StatusOr<double> solved = HalfWidthFor(*level, *args.p, *reference);
      if (!solved.ok()) return Fail(err, kUsageError, solved.status());
      w = *solved;
      p = *args.p;
      solved_for = "half_width_w";
    } else {
      absl::StatusOr<double> solved = CoverageFor(*level, *args.w, *reference);
      if (!solved.ok()) return Fail(err, kUsageError, solved.status());
      w = *args.w;
      p = *solved;
      solved_for = "confidence_p";
    }
  }
  const PrivacyLevel level = *PrivacyLevel::Create(epsilon);

  switch (*format) {
    case Format::kJson: {
      Json json;
      json["solved_for"] = solved_for;
      json["epsilon"] = epsilon;
      json["half_width_w"] = w;
      json["confidence_p"] = p;
      json["reference_c"] = *args.c;
      json["laplace_scale"] = level.scale();
      json["noise_stddev"] = level.standard_deviation();
      out << json.dump() << '\n';
      break;
    }
    case Format::kCsv:
      out << "solved_for,epsilon,half_width_w,confidence_p,reference_c,"
             "laplace_scale,noise_stddev\n"
          << solved_for << ',' << Full(epsilon) << ',' << Full(w) << ','
          << Full(p) << ',' << Full(*args.c) << ',' << Full(level.scale())
          << ',' << Full(level.standard_deviation()) << '\n';
      break;
    case Format::kTable:
      PrintTable(out, {{"solved_for", solved_for},
                       {"epsilon", Short(epsilon)},
                       {"half_width_w", Short(w)},
                       {"confidence_p", Short(p)},
                       {"reference_c", Short(*args.c)},
                       {"laplace_scale", Short(level.scale())},
                       {"noise_stddev", Short(level.standard_deviation())}});
      break;
  }
  return kSuccess;
}

// ------------------------------------------------------------------- sample

struct SampleArgs {
  double epsilon = 0;
  int64_t count = 10;
};

int RunSample(const SampleArgs& args, const Globals& globals, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<Format> format = ResolveFormat(globals, Format::kTable);
  if (!format.ok()) return Fail(err, kUsageError, format.status());
  absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(args.epsilon);
  if (!level.ok()) return Fail(err, kUsageError, level.status());
  if (args.count < 1) return Fail(err, kUsageError, "--n must be positive");

  const uint64_t seed = EffectiveSeed(globals, err);
  SeededUniform uniform(seed);
  const LaplaceDistribution noise(*level);
  std::vector<double> samples(args.count);
  for (double& x : samples) x = noise.Sample(uniform);

  switch (*format) {
    case Format::kJson: {
      Json json;
      json["seed"] = seed;
      json["epsilon"] = args.epsilon;
      json["samples"] = samples;
      out << json.dump() << '\n';
      break;
    }
    case Format::kCsv:
      out << "x\n";
      for (double x : samples) out << Full(x) << '\n';
      break;
    case Format::kTable: {
      std::vector<std::vector<std::string>> rows = {
          {"seed", absl::StrCat(seed)}, {"epsilon", Short(args.epsilon)}};
      for (size_t i = 0; i < samples.size(); ++i) {
        rows.push_back({absl::StrCat("[", i, "]"), Short(samples[i])});
      }
      PrintTable(out, rows);
      break;
    }
  }
  return kSuccess;
}

// -------------------------------------------------------------------- query

struct QueryArgs {
  std::string data_path;
  std::string data_format;
  std::string where;
  std::optional<double> epsilon;
  std::optional<double> w;
  std::optional<double> p;
  std::optional<double> reference_c;
  std::string ledger_path;
  std::optional<double> budget;
  bool round = false;
  bool clamp_at_zero = false;
};

absl::StatusOr<std::unique_ptr<BudgetLedger>> OpenLedger(const QueryArgs& args,
                                                         std::ostream& err) {
  if (std::filesystem::exists(args.ledger_path)) {
    absl::StatusOr<std::unique_ptr<BudgetLedger>> ledger =
        BudgetLedger::LoadFile(args.ledger_path);
    if (ledger.ok() && args.budget.has_value() &&
        *args.budget != (*ledger)->total_budget()) {
      err << "dpcalib: ignoring --budget; ledger '" << args.ledger_path
          << "' already has total budget " << (*ledger)->total_budget() << '\n';
    }
    return ledger;
  }
  if (!args.budget.has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ledger '", args.ledger_path,
        "' does not exist; pass --budget to create it"));
  }
  return BudgetLedger::CreateFile(args.ledger_path, *args.budget);
}

int RunQuery(const QueryArgs& args, const Globals& globals, std::ostream& out,
             std::ostream& err) {
  const bool by_epsilon = args.epsilon.has_value();
  const bool by_spec = args.w.has_value() || args.p.has_value();
  if (by_epsilon == by_spec ||
      (by_spec && !(args.w.has_value() && args.p.has_value()))) {
    return Fail(err, kUsageError,
                "query needs either --epsilon E or both --w W and --p P");
  }
  if (args.reference_c.has_value() && !by_spec) {
    return Fail(err, kUsageError, "--reference-c only applies with --w/--p");
  }
  if (args.ledger_path.empty()) {
    return Fail(err, kUsageError,
                absl::StrCat("no ledger: pass --ledger or set ", kLedgerEnvVar));
  }
  if (!globals.output_format.empty() && globals.output_format != "json") {
    return Fail(err, kUsageError, "query output is always json");
  }

  absl::StatusOr<CountPredicate> predicate = ParsePredicate(args.where);
  if (!predicate.ok()) return Fail(err, kUsageError, predicate.status());

  DatasetFormat data_format = GuessFormat(args.data_path);
  if (args.data_format == "csv") data_format = DatasetFormat::kCsv;
  if (args.data_format == "jsonl") data_format = DatasetFormat::kJsonLines;
  absl::StatusOr<Dataset> dataset = IngestFile(args.data_path, data_format);
  if (!dataset.ok()) return Fail(err, kIoError, dataset.status());

  // Fail on a bad predicate before touching the ledger.
  if (absl::StatusOr<int64_t> count = TrueCount(*dataset, *predicate);
      !count.ok()) {
    return Fail(err, kUsageError, count.status());
  }

  absl::StatusOr<std::unique_ptr<BudgetLedger>> ledger = OpenLedger(args, err);
  if (!ledger.ok()) {
    const int code = ledger.status().code() ==
                             absl::StatusCode::kFailedPrecondition
                         ? kUsageError
                         : kIoError;
    return Fail(err, code, ledger.status());
  }

  const ReleaseOptions release{args.round, args.clamp_at_zero};
  const uint64_t seed = EffectiveSeed(globals, err);
  SeededUniform sampler(seed);
  absl::StatusOr<NoisyResponse> response;
  if (by_epsilon) {
    absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(*args.epsilon);
    if (!level.ok()) return Fail(err, kUsageError, level.status());
    response = NoisyCount(*dataset, *predicate, *level, sampler, **ledger,
                          release);
  } else {
    absl::StatusOr<ConfidenceSpec> spec = ConfidenceSpec::Create(*args.w, *args.p);
    if (!spec.ok()) return Fail(err, kUsageError, spec.status());
    CalibrationOptions options;
    options.release = release;
    if (args.reference_c.has_value()) {
      absl::StatusOr<ReferenceCount> reference =
          ReferenceCount::Create(*args.reference_c);
      if (!reference.ok()) return Fail(err, kUsageError, reference.status());
      options.public_reference = *reference;
    }
    response = CalibratedNoisyCount(*dataset, *predicate, *spec, sampler,
                                    **ledger, options);
  }
  if (!response.ok()) {
    switch (response.status().code()) {
      case absl::StatusCode::kResourceExhausted:
        return Fail(err, kBudgetRefused, response.status());
      case absl::StatusCode::kUnavailable:
        return Fail(err, kIoError, response.status());
      default:
        return Fail(err, kUsageError, response.status());
    }
  }
  out << ToAnalystJson(*response) << '\n';
  return kSuccess;
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  int64_t n_trials = 200000;
  int workers = 1;
};

struct CheckResult {
  std::string name;
  Json params;
  std::string params_text;
  std::string observed;
  std::string expected;
  std::string status;  // pass | fail | inconclusive
  Json report;
};

// Indices into the derived seed stream, one per randomized check.
enum SeedStream : uint64_t {
  kCoverageStream = 0,
  kHistogramStream = 100,
  kSamplerStream = 200,
};

absl::Status AddCoverageChecks(const VerifyArgs& args, uint64_t seed,
                               std::vector<CheckResult>& checks) {
  constexpr double kW = 0.2;
  constexpr double kC = 100;
  // Grid of lambda*w*c, plus the (w=0.2, p=0.8, c=100) calibration.
  std::vector<double> products = {0.1, 0.5, 1.0, 1.6, 3.0};
  std::vector<double> lambdas;
  for (double a : products) lambdas.push_back(a / (kW * kC));
  lambdas.push_back(-std::log(0.2) / (kW * kC));

  const ReferenceCount reference = *ReferenceCount::Create(kC);
  for (size_t i = 0; i < lambdas.size(); ++i) {
    absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(lambdas[i]);
    if (!level.ok()) return level.status();
    absl::StatusOr<CoverageReport> report =
        EmpiricalCoverage(*level, kW, reference, args.n_trials,
                          DeriveSeed(seed, kCoverageStream + i), args.workers);
    if (!report.ok()) return report.status();
    CheckResult check;
    check.name = "coverage";
    check.params = {{"lambda", lambdas[i]}, {"w", kW}, {"c", kC}};
    check.params_text = absl::StrCat("lambda=", Short(lambdas[i]), " w=",
                                     Short(kW), " c=", Short(kC));
    check.observed = Short(report->empirical_p);
    check.expected = absl::StrCat(
        Short(report->target_p), " +/- ",
        Short(kCoverageSigmas * report->standard_error + kCoverageSlack));
    check.status = report->pass ? "pass" : "fail";
    check.report = Json::parse(ToJson(*report));
    checks.push_back(std::move(check));
  }
  return absl::OkStatus();
}

absl::Status AddRatioChecks(std::vector<CheckResult>& checks) {
  auto add = [&](int64_t c_low, double epsilon, double response) {
    absl::StatusOr<RatioReport> report =
        Distinguishability(c_low, epsilon, response);
    if (!report.ok()) return report.status();
    CheckResult check;
    check.name = "distinguishability";
    check.params = {{"c_low", c_low}, {"epsilon", epsilon},
                    {"response", response}};
    check.params_text = absl::StrCat("c_low=", c_low, " eps=", Short(epsilon),
                                     " response=", Short(response));
    check.observed = Short(report->observed_ratio);
    check.expected = absl::StrCat("[", Short(report->lower_bound), ", ",
                                  Short(report->upper_bound), "]");
    check.status = report->pass ? "pass" : "fail";
    check.report = Json::parse(ToJson(*report));
    checks.push_back(std::move(check));
    return absl::OkStatus();
  };

  if (absl::Status s = add(10, 0.01, 12); !s.ok()) return s;
  // Response sweep over [c_low - 5, c_low + 6] in quarter steps; reported as
  // one aggregated row per epsilon.
  for (double epsilon : {0.01, 0.1, 1.0}) {
    constexpr int64_t kLow = 10;
    int total = 0, passed = 0;
    double worst_log_ratio = 0;
    for (int k = 0; k <= 44; ++k) {
      const double response = kLow - 5 + 0.25 * k;
      absl::StatusOr<RatioReport> report =
          Distinguishability(kLow, epsilon, response);
      if (!report.ok()) return report.status();
      ++total;
      passed += report->pass;
      worst_log_ratio =
          std::max(worst_log_ratio, std::fabs(std::log(report->observed_ratio)));
    }
    CheckResult check;
    check.name = "distinguishability_sweep";
    check.params = {{"c_low", kLow}, {"epsilon", epsilon},
                    {"response_min", kLow - 5}, {"response_max", kLow + 6},
                    {"step", 0.25}};
    check.params_text = absl::StrCat("c_low=", kLow, " eps=", Short(epsilon),
                                     " response in [5, 16]");
    check.observed = absl::StrCat("max|log r|=", Short(worst_log_ratio));
    check.expected = absl::StrCat("<= ", Short(epsilon));
    check.status = passed == total ? "pass" : "fail";
    check.report = {{"points", total}, {"passed", passed},
                    {"max_abs_log_ratio", worst_log_ratio}};
    checks.push_back(std::move(check));
  }
  return absl::OkStatus();
}

absl::Status AddHistogramCheck(const VerifyArgs& args, uint64_t seed,
                               std::vector<CheckResult>& checks) {
  constexpr double kLambda = 0.5;
  constexpr double kBinWidth = 0.25;
  const int64_t n = std::max(args.n_trials, kMinHistogramSamples);
  absl::StatusOr<DensityRatioReport> report =
      EmpiricalDensityRatio(*PrivacyLevel::Create(kLambda), n, kBinWidth,
                            DeriveSeed(seed, kHistogramStream));
  if (!report.ok()) return report.status();
  CheckResult check;
  check.name = "density_ratio_histogram";
  check.params = {{"lambda", kLambda}, {"n_samples", n},
                  {"bin_width", kBinWidth}};
  check.params_text = absl::StrCat("lambda=", Short(kLambda), " n=", n,
                                   " bin=", Short(kBinWidth));
  check.observed = absl::StrCat("max dev=", Short(report->max_deviation));
  check.expected = absl::StrCat("<= ", Short(3 * report->max_standard_error));
  switch (report->outcome) {
    case HistogramOutcome::kPass: check.status = "pass"; break;
    case HistogramOutcome::kFail: check.status = "fail"; break;
    case HistogramOutcome::kInconclusive: check.status = "inconclusive"; break;
  }
  check.report = Json::parse(ToJson(*report));
  checks.push_back(std::move(check));
  return absl::OkStatus();
}

absl::Status AddSamplerCheck(const VerifyArgs& args, uint64_t seed,
                             std::vector<CheckResult>& checks) {
  constexpr double kLambda = 0.1;
  absl::StatusOr<SamplerReport> report =
      SamplerFidelity(*PrivacyLevel::Create(kLambda), args.n_trials,
                      DeriveSeed(seed, kSamplerStream));
  if (!report.ok()) return report.status();
  CheckResult check;
  check.name = "sampler_ks";
  check.params = {{"lambda", kLambda}, {"n_samples", args.n_trials}};
  check.params_text =
      absl::StrCat("lambda=", Short(kLambda), " n=", args.n_trials);
  check.observed = absl::StrCat("D=", Short(report->ks_statistic),
                                " var=", Short(report->variance));
  check.expected = absl::StrCat("D<", Short(report->ks_critical_value),
                                " var~", Short(report->expected_variance));
  check.status = report->pass ? "pass" : "fail";
  check.report = Json::parse(ToJson(*report));
  checks.push_back(std::move(check));
  return absl::OkStatus();
}

int RunVerify(const VerifyArgs& args, const Globals& globals, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<Format> format = ResolveFormat(globals, Format::kTable);
  if (!format.ok()) return Fail(err, kUsageError, format.status());
  if (args.n_trials < kMinCoverageTrials) {
    return Fail(err, kUsageError,
                absl::StrCat("--n-trials must be at least ", kMinCoverageTrials));
  }
  const uint64_t seed = EffectiveSeed(globals, err);
  const bool all = args.suite == "all";

  std::vector<CheckResult> checks;
  absl::Status status;
  if (status.ok() && (all || args.suite == "coverage")) {
    status = AddCoverageChecks(args, seed, checks);
  }
  if (status.ok() && (all || args.suite == "ratio")) {
    status = AddRatioChecks(checks);
  }
  if (status.ok() && (all || args.suite == "histogram")) {
    status = AddHistogramCheck(args, seed, checks);
  }
  if (status.ok() && (all || args.suite == "sampler")) {
    status = AddSamplerCheck(args, seed, checks);
  }
  if (!status.ok()) return Fail(err, kUsageError, status);

  const bool passed = std::none_of(checks.begin(), checks.end(),
                                   [](const CheckResult& c) {
                                     return c.status == "fail";
                                   });
  switch (*format) {
    case Format::kJson: {
      Json json;
      json["seed"] = seed;
      json["suite"] = args.suite;
      json["n_trials"] = args.n_trials;
      json["checks"] = Json::array();
      for (const CheckResult& check : checks) {
        json["checks"].push_back({{"name", check.name},
                                  {"params", check.params},
                                  {"status", check.status},
                                  {"report", check.report}});
      }
      json["passed"] = passed;
      out << json.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      out << "name,params,observed,expected,status\n";
      for (const CheckResult& check : checks) {
        out << check.name << ",\"" << check.params_text << "\",\""
            << check.observed << "\",\"" << check.expected << "\","
            << check.status << '\n';
      }
      break;
    case Format::kTable: {
      std::vector<std::vector<std::string>> rows = {
          {"check", "parameters", "observed", "expected", "result"}};
      for (const CheckResult& check : checks) {
        rows.push_back({check.name, check.params_text, check.observed,
                        check.expected, check.status});
      }
      PrintTable(out, rows);
      out << "seed " << seed << ": " << (passed ? "all checks passed" : "FAILED")
          << '\n';
      break;
    }
  }
  return passed ? kSuccess : kVerificationFailure;
}

// ------------------------------------------------------------------- curves

struct CurvesArgs {
  std::string mode;
  std::vector<double> lambdas;
  std::optional<double> c;
  std::vector<double> ws;
  std::vector<double> ps;
  double w_min = kDefaultWMin;
  double w_max = kDefaultWMax;
  double c_min = kDefaultCMin;
  double c_max = kDefaultCMax;
  int points = kDefaultGridPoints;
  std::string output_path;
};

absl::StatusOr<std::vector<CurveSeries>> BuildCurves(const CurvesArgs& args) {
  std::vector<CurveSeries> series;
  if (args.mode == "iso-lambda") {
    if (args.lambdas.empty()) {
      return absl::InvalidArgumentError("iso-lambda needs --lambda values");
    }
    if (!args.c.has_value()) {
      return absl::InvalidArgumentError("iso-lambda needs --c");
    }
    absl::StatusOr<ReferenceCount> reference = ReferenceCount::Create(*args.c);
    if (!reference.ok()) return reference.status();
    absl::StatusOr<std::vector<double>> grid =
        LogSpacedGrid(args.w_min, args.w_max, args.points);
    if (!grid.ok()) return grid.status();
    for (double lambda : args.lambdas) {
      absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(lambda);
      if (!level.ok()) return level.status();
      absl::StatusOr<CurveSeries> curve =
          IsoLambdaCurve(*level, *reference, *grid);
      if (!curve.ok()) return curve.status();
      series.push_back(*std::move(curve));
    }
    return series;
  }
  if (args.mode == "epsilon-vs-c") {
    if (args.ws.empty() || args.ps.empty()) {
      return absl::InvalidArgumentError("epsilon-vs-c needs --w and --p values");
    }
    const size_t count = std::max(args.ws.size(), args.ps.size());
    if ((args.ws.size() != count && args.ws.size() != 1) ||
        (args.ps.size() != count && args.ps.size() != 1)) {
      return absl::InvalidArgumentError(
          "--w and --p lists must have equal length (or one of them a single "
          "value)");
    }
    absl::StatusOr<std::vector<double>> grid =
        LogSpacedGrid(args.c_min, args.c_max, args.points);
    if (!grid.ok()) return grid.status();
    for (size_t i = 0; i < count; ++i) {
      absl::StatusOr<ConfidenceSpec> spec = ConfidenceSpec::Create(
          args.ws[args.ws.size() == 1 ? 0 : i],
          args.ps[args.ps.size() == 1 ? 0 : i]);
      if (!spec.ok()) return spec.status();
      absl::StatusOr<CurveSeries> curve = EpsilonVsTrueValue(*spec, *grid);
      if (!curve.ok()) return curve.status();
      series.push_back(*std::move(curve));
    }
    return series;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown curve mode '", args.mode, "'"));
}

void WriteCurves(const std::vector<CurveSeries>& series, Format format,
                 std::ostream& out) {
  switch (format) {
    case Format::kJson: {
      Json json = Json::array();
      for (const CurveSeries& s : series) {
        json.push_back(Json::parse(CurveSeriesToJson(s)));
      }
      out << json.dump() << '\n';
      break;
    }
    case Format::kCsv:
      // A lone series is plain x,y CSV; several are separated into labelled
      // blocks.
      for (size_t i = 0; i < series.size(); ++i) {
        if (series.size() > 1) {
          if (i > 0) out << '\n';
          out << "# " << series[i].label << '\n';
        }
        out << CurveSeriesToCsv(series[i]);
      }
      break;
    case Format::kTable:
      for (size_t i = 0; i < series.size(); ++i) {
        if (i > 0) out << '\n';
        std::vector<std::vector<std::string>> rows = {{"x", "y"}};
        for (const auto& [x, y] : series[i].points) {
          rows.push_back({Short(x), Short(y)});
        }
        out << series[i].label << '\n';
        PrintTable(out, rows);
      }
      break;
  }
}

int RunCurves(const CurvesArgs& args, const Globals& globals, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<Format> format = ResolveFormat(globals, Format::kCsv);
  if (!format.ok()) return Fail(err, kUsageError, format.status());
  absl::StatusOr<std::vector<CurveSeries>> series = BuildCurves(args);
  if (!series.ok()) return Fail(err, kUsageError, series.status());
  if (args.output_path.empty()) {
    WriteCurves(*series, *format, out);
    return kSuccess;
  }
  std::ofstream file(args.output_path);
  WriteCurves(*series, *format, file);
  file.flush();
  if (!file) {
    return Fail(err, kIoError,
                absl::StrCat("cannot write '", args.output_path, "'"));
  }
  return kSuccess;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Laplace-mechanism counting queries with epsilon chosen from "
               "a confidence interval",
               "dpcalib"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed,
                 "64-bit seed; drawn from system entropy and echoed if absent");
  app.add_option("--output-format", globals.output_format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  CalibrateArgs calibrate_args;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Solve for epsilon, w or p given the "
                                      "other two and the reference count c");
  calibrate->add_option("--epsilon", calibrate_args.epsilon, "privacy level");
  calibrate->add_option("--w", calibrate_args.w, "relative half-width");
  calibrate->add_option("--p", calibrate_args.p, "confidence level");
  calibrate->add_option("--c", calibrate_args.c, "reference count");

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand("sample", "Draw Laplace noise");
  sample->add_option("--epsilon", sample_args.epsilon, "privacy level")
      ->required();
  sample->add_option("--n", sample_args.count, "number of samples")
      ->capture_default_str();

  QueryArgs query_args;
  CLI::App* query = app.add_subcommand("query", "Answer a noisy counting query");
  query->add_option("--data", query_args.data_path,
                    "CSV or JSON-lines dataset; '-' reads standard input")
      ->required();
  query->add_option("--format", query_args.data_format,
                    "dataset format (default: from extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  query->add_option("--where", query_args.where,
                    "predicate `column OP literal`, OP in = != < <= > >= ~")
      ->required();
  query->add_option("--epsilon", query_args.epsilon, "explicit privacy level");
  query->add_option("--w", query_args.w, "relative half-width");
  query->add_option("--p", query_args.p, "confidence level");
  query->add_option("--reference-c", query_args.reference_c,
                    "public reference count for calibration instead of the "
                    "exact count");
  query->add_option("--ledger", query_args.ledger_path, "budget ledger file")
      ->envname(kLedgerEnvVar);
  query->add_option("--budget", query_args.budget,
                    "total budget when creating a new ledger");
  query->add_flag("--round", query_args.round, "round the released value");
  query->add_flag("--clamp-at-zero", query_args.clamp_at_zero,
                  "clamp negative released values to 0");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--suite", verify_args.suite,
                     "coverage, ratio, histogram, sampler or all")
      ->check(CLI::IsMember({"coverage", "ratio", "histogram", "sampler", "all"}))
      ->capture_default_str();
  verify->add_option("--n-trials", verify_args.n_trials, "Monte Carlo trials")
      ->capture_default_str();
  verify->add_option("--workers", verify_args.workers,
                     "threads for coverage trials; results do not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CurvesArgs curves_args;
  CLI::App* curves = app.add_subcommand("curves", "Emit figure data series");
  curves->add_option("--mode", curves_args.mode, "iso-lambda or epsilon-vs-c")
      ->required()
      ->check(CLI::IsMember({"iso-lambda", "epsilon-vs-c"}));
  curves->add_option("--lambda", curves_args.lambdas, "lambda values")
      ->delimiter(',');
  curves->add_option("--c", curves_args.c, "reference count (iso-lambda)");
  curves->add_option("--w", curves_args.ws, "half-widths (epsilon-vs-c)")
      ->delimiter(',');
  curves->add_option("--p", curves_args.ps, "confidence levels (epsilon-vs-c)")
      ->delimiter(',');
  curves->add_option("--w-min", curves_args.w_min)->capture_default_str();
  curves->add_option("--w-max", curves_args.w_max)->capture_default_str();
  curves->add_option("--c-min", curves_args.c_min)->capture_default_str();
  curves->add_option("--c-max", curves_args.c_max)->capture_default_str();
  curves->add_option("--points", curves_args.points, "points per series")
      ->capture_default_str();
  curves->add_option("--output", curves_args.output_path,
                     "write to this file instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  if (*calibrate) return RunCalibrate(calibrate_args, globals, out, err);
  if (*sample) return RunSample(sample_args, globals, out, err);
  if (*query) return RunQuery(query_args, globals, out, err);
  if (*verify) return RunVerify(verify_args, globals, out, err);
  if (*curves) return RunCurves(curves_args, globals, out, err);
  return Fail(err, kUsageError, "no subcommand");
}

}  // namespace dpcalib::cli
