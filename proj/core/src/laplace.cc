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

#include "dpcalib/laplace.h"

#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpcalib {

absl::StatusOr<PrivacyLevel> PrivacyLevel::Create(double lambda) {
  if (!std::isfinite(lambda)) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda must be finite, got ", lambda));
  }
  if (!(lambda > kMinLambda && lambda < kMaxLambda)) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda must lie in (", kMinLambda, ", ", kMaxLambda,
                     "), got ", lambda));
  }
  return PrivacyLevel(lambda);
}

double PrivacyLevel::standard_deviation() const {
  return std::numbers::sqrt2 / lambda_;
}

absl::StatusOr<double> LaplaceDistribution::Pdf(double x) const {
  if (!std::isfinite(x)) {
    return absl::InvalidArgumentError(absl::StrCat("pdf argument ", x,
                                                   " is not finite"));
  }
  return 0.5 * lambda() * std::exp(-lambda() * std::fabs(x));
}

absl::StatusOr<double> LaplaceDistribution::Cdf(double x) const {
  if (!std::isfinite(x)) {
    return absl::InvalidArgumentError(absl::StrCat("cdf argument ", x,
                                                   " is not finite"));
  }
  return CdfUnchecked(x);
}

double LaplaceDistribution::CdfUnchecked(double x) const {
  if (x < 0) return 0.5 * std::exp(lambda() * x);
  return 1.0 - 0.5 * std::exp(-lambda() * x);
}

absl::StatusOr<double> LaplaceDistribution::Quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantile level must lie in (0, 1), got ", u));
  }
  return QuantileUnchecked(u);
}

double LaplaceDistribution::QuantileUnchecked(double u) const {
  if (u < 0.5) return std::log(2.0 * u) / lambda();
  // 1 - u is exact for u >= 1/2.
  return -std::log(2.0 * (1.0 - u)) / lambda();
}

absl::StatusOr<double> LaplaceDistribution::DensityRatio(double shift,
                                                         double x) const {
  if (std::fabs(shift) != 1.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "adjacent counts differ by exactly 1; got shift ", shift));
  }
  if (!std::isfinite(x)) {
    return absl::InvalidArgumentError(absl::StrCat("density ratio argument ",
                                                   x, " is not finite"));
  }
  return std::exp(lambda() * (std::fabs(x + shift) - std::fabs(x)));
}

double LaplaceDistribution::Sample(SeededUniform& uniform) const {
  return QuantileUnchecked(uniform.Next());
}

}  // namespace dpcalib
