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

#ifndef DPCALIB_LAPLACE_H_
#define DPCALIB_LAPLACE_H_

#include "absl/status/statusor.h"
#include "dpcalib/random.h"

namespace dpcalib {

// The privacy level of the Laplace mechanism on a counting query. For
// sensitivity-1 queries the differential-privacy epsilon and the Laplace rate
// parameter lambda coincide, so this type carries both names.
class PrivacyLevel {
 public:
  // Accepted open range for lambda. Values outside it are treated as
  // configuration errors rather than silently losing precision.
  static constexpr double kMinLambda = 1e-12;
  static constexpr double kMaxLambda = 1e12;

  static absl::StatusOr<PrivacyLevel> Create(double lambda);

  double lambda() const { return lambda_; }
  double epsilon() const { return lambda_; }

  // Conventional scale b = 1/lambda and the noise standard deviation
  // sqrt(2)/lambda.
  double scale() const { return 1.0 / lambda_; }
  double standard_deviation() const;

  friend bool operator==(PrivacyLevel, PrivacyLevel) = default;

 private:
  explicit PrivacyLevel(double lambda) : lambda_(lambda) {}

  double lambda_;
};

// Zero-centred Laplace distribution with density (lambda/2) exp(-lambda |x|).
// All evaluation methods are pure; Sample() mutates only the caller's source.
class LaplaceDistribution {
 public:
  explicit LaplaceDistribution(PrivacyLevel level) : level_(level) {}

  PrivacyLevel level() const { return level_; }
  double lambda() const { return level_.lambda(); }

  // Non-finite x yields InvalidArgument.
  absl::StatusOr<double> Pdf(double x) const;
  absl::StatusOr<double> Cdf(double x) const;

  // Inverse of Cdf for u in the open interval (0, 1).
  absl::StatusOr<double> Quantile(double u) const;

  // pdf(x) / pdf(x + shift) for adjacent counts, |shift| == 1. Evaluated as
  // exp(lambda (|x + shift| - |x|)) so far tails do not underflow.
  absl::StatusOr<double> DensityRatio(double shift, double x) const;

  // Inverse-transform draw: one uniform per sample.
  double Sample(SeededUniform& uniform) const;

 private:
  // Unchecked forms used internally once arguments are validated.
  double CdfUnchecked(double x) const;
  double QuantileUnchecked(double u) const;

  PrivacyLevel level_;
};

}  // namespace dpcalib

#endif  // DPCALIB_LAPLACE_H_
