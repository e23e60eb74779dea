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

#include "dpcalib/calibration.h"

#include <charconv>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace dpcalib {
namespace {

absl::Status CheckHalfWidth(double w) {
  if (!std::isfinite(w) || !(w > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("half_width_w must be a finite positive number, got ", w));
  }
  return absl::OkStatus();
}

absl::Status CheckConfidence(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("confidence_p must lie in (0, 1), got ", p));
  }
  return absl::OkStatus();
}

absl::Status CheckGrid(std::span<const double> grid, const char* name) {
  if (grid.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(name, " is empty"));
  }
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !(grid[i] > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          name, "[", i, "] = ", grid[i], " is not a finite positive number"));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " is not strictly increasing at index ", i));
    }
  }
  return absl::OkStatus();
}

// Shortest decimal spelling that round-trips.
std::string Repr(double x) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, end);
}

// -ln(1 - p), accurate for small p.
double NegLogComplement(double p) { return -std::log1p(-p); }

}  // namespace

absl::StatusOr<ConfidenceSpec> ConfidenceSpec::Create(double half_width_w,
                                                      double confidence_p) {
  if (absl::Status s = CheckHalfWidth(half_width_w); !s.ok()) return s;
  if (absl::Status s = CheckConfidence(confidence_p); !s.ok()) return s;
  return ConfidenceSpec(half_width_w, confidence_p);
}

absl::StatusOr<ReferenceCount> ReferenceCount::Create(double c) {
  if (!std::isfinite(c) || !(c > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "reference count c must be a finite positive number, got ", c));
  }
  return ReferenceCount(c);
}

absl::StatusOr<PrivacyLevel> EpsilonFor(const ConfidenceSpec& spec,
                                        const ReferenceCount& reference) {
  const double lambda = NegLogComplement(spec.confidence_p()) /
                        (spec.half_width_w() * reference.value());
  absl::StatusOr<PrivacyLevel> level = PrivacyLevel::Create(lambda);
  if (!level.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("(w=", spec.half_width_w(), ", p=", spec.confidence_p(),
                     ", c=", reference.value(),
                     ") yields an unusable epsilon: ", level.status().message()));
  }
  return level;
}

absl::StatusOr<double> CoverageFor(PrivacyLevel level, double half_width_w,
                                   const ReferenceCount& reference) {
  if (absl::Status s = CheckHalfWidth(half_width_w); !s.ok()) return s;
  return -std::expm1(-level.lambda() * half_width_w * reference.value());
}

absl::StatusOr<double> HalfWidthFor(PrivacyLevel level, double confidence_p,
                                    const ReferenceCount& reference) {
  if (absl::Status s = CheckConfidence(confidence_p); !s.ok()) return s;
  return NegLogComplement(confidence_p) / (level.lambda() * reference.value());
}

absl::StatusOr<CurveSeries> IsoLambdaCurve(PrivacyLevel level,
                                           const ReferenceCount& reference,
                                           std::span<const double> w_grid) {
  if (absl::Status s = CheckGrid(w_grid, "w_grid"); !s.ok()) return s;
  CurveSeries series;
  series.label =
      absl::StrCat("lambda=", Repr(level.lambda()), ",c=", Repr(reference.value()));
  series.points.reserve(w_grid.size());
  for (double w : w_grid) {
    absl::StatusOr<double> p = CoverageFor(level, w, reference);
    if (!p.ok()) return p.status();
    series.points.emplace_back(w, *p);
  }
  return series;
}

absl::StatusOr<CurveSeries> EpsilonVsTrueValue(const ConfidenceSpec& spec,
                                               std::span<const double> c_grid) {
  if (absl::Status s = CheckGrid(c_grid, "c_grid"); !s.ok()) return s;
  CurveSeries series;
  series.label = absl::StrCat("w=", Repr(spec.half_width_w()),
                              ",p=", Repr(spec.confidence_p()));
  series.points.reserve(c_grid.size());
  for (double c : c_grid) {
    absl::StatusOr<ReferenceCount> reference = ReferenceCount::Create(c);
    if (!reference.ok()) return reference.status();
    absl::StatusOr<PrivacyLevel> level = EpsilonFor(spec, *reference);
    if (!level.ok()) return level.status();
    series.points.emplace_back(c, level->epsilon());
  }
  return series;
}

absl::StatusOr<std::vector<double>> LogSpacedGrid(double low, double high,
                                                  int count) {
  if (count < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid needs at least one point, got ", count));
  }
  if (!std::isfinite(low) || !std::isfinite(high) || !(low > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid bounds must be finite and positive, got [", low,
                     ", ", high, "]"));
  }
  if (count == 1) return std::vector<double>{low};
  if (!(high > low)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid upper bound ", high, " must exceed lower bound ", low));
  }
  std::vector<double> grid(count);
  const double log_low = std::log(low);
  const double step = (std::log(high) - log_low) / (count - 1);
  grid.front() = low;
  for (int i = 1; i < count - 1; ++i) grid[i] = std::exp(log_low + i * step);
  grid.back() = high;
  return grid;
}

std::string CurveSeriesToCsv(const CurveSeries& series) {
  std::string out = "x,y\n";
  for (const auto& [x, y] : series.points) {
    absl::StrAppendFormat(&out, "%.17g,%.17g\n", x, y);
  }
  return out;
}

std::string CurveSeriesToJson(const CurveSeries& series) {
  nlohmann::ordered_json json;
  json["label"] = series.label;
  json["points"] = nlohmann::json::array();
  for (const auto& [x, y] : series.points) {
    json["points"].push_back({x, y});
  }
  return json.dump();
}

}  // namespace dpcalib
