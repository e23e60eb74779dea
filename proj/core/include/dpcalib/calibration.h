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

#ifndef DPCALIB_CALIBRATION_H_
#define DPCALIB_CALIBRATION_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcalib/laplace.h"

namespace dpcalib {

// Analyst-facing accuracy target: with probability `confidence_p` the true
// count lies within +/- half_width_w * c of the released value.
class ConfidenceSpec {
 public:
  static absl::StatusOr<ConfidenceSpec> Create(double half_width_w,
                                               double confidence_p);

  double half_width_w() const { return half_width_w_; }
  double confidence_p() const { return confidence_p_; }

 private:
  ConfidenceSpec(double w, double p) : half_width_w_(w), confidence_p_(p) {}

  double half_width_w_;
  double confidence_p_;
};

// The count that the relative half-width is measured against.
//
// The formulas need the true count, which only the data curator knows. The
// curator supplies either that exact count or a public magnitude estimate.
// Note that publishing an epsilon derived from the exact count reveals
// information about that count.
class ReferenceCount {
 public:
  static absl::StatusOr<ReferenceCount> Create(double c);

  double value() const { return c_; }

 private:
  explicit ReferenceCount(double c) : c_(c) {}

  double c_;
};

// lambda = -ln(1 - p) / (w c).
absl::StatusOr<PrivacyLevel> EpsilonFor(const ConfidenceSpec& spec,
                                        const ReferenceCount& reference);

// p = 1 - exp(-lambda w c). May round to exactly 1.0 once lambda w c > ~37.
absl::StatusOr<double> CoverageFor(PrivacyLevel level, double half_width_w,
                                   const ReferenceCount& reference);

// w = -ln(1 - p) / (lambda c): the interval a given budget buys.
absl::StatusOr<double> HalfWidthFor(PrivacyLevel level, double confidence_p,
                                    const ReferenceCount& reference);

struct CurveSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Points (w, CoverageFor(level, w, reference)). The grid must be non-empty,
// strictly increasing and positive.
absl::StatusOr<CurveSeries> IsoLambdaCurve(PrivacyLevel level,
                                           const ReferenceCount& reference,
                                           std::span<const double> w_grid);

// Points (c, EpsilonFor(spec, c)); an exact hyperbola in c.
absl::StatusOr<CurveSeries> EpsilonVsTrueValue(const ConfidenceSpec& spec,
                                               std::span<const double> c_grid);

// `count` points, log-spaced from `low` to `high` inclusive.
absl::StatusOr<std::vector<double>> LogSpacedGrid(double low, double high,
                                                  int count);

inline constexpr int kDefaultGridPoints = 100;
inline constexpr double kDefaultWMin = 0.01;
inline constexpr double kDefaultWMax = 1.0;
inline constexpr double kDefaultCMin = 1.0;
inline constexpr double kDefaultCMax = 1e4;

// CSV with header "x,y", full precision.
std::string CurveSeriesToCsv(const CurveSeries& series);
// {"label": ..., "points": [[x, y], ...]}
std::string CurveSeriesToJson(const CurveSeries& series);

}  // namespace dpcalib

#endif  // DPCALIB_CALIBRATION_H_
