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

#include "dpcalib/query_engine.h"

#include <cmath>
#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "nlohmann/json.hpp"

namespace dpcalib {
namespace {

int64_t CountMatches(const Dataset& dataset, const BoundPredicate& bound) {
  int64_t count = 0;
  for (size_t i = 0; i < dataset.row_count(); ++i) {
    if (bound.Matches(dataset.row(i))) ++count;
  }
  return count;
}

absl::StatusOr<NoisyResponse> Release(int64_t true_count, PrivacyLevel level,
                                      SeededUniform& sampler,
                                      BudgetLedger& ledger,
                                      const ReleaseOptions& release) {
  absl::StatusOr<std::string> query_id = ledger.Charge(level.epsilon());
  if (!query_id.ok()) return query_id.status();

  NoisyResponse response;
  response.query_id = *std::move(query_id);
  response.true_value = true_count;
  response.epsilon_charged = level.epsilon();
  response.noisy_value = static_cast<double>(true_count) +
                         LaplaceDistribution(level).Sample(sampler);
  if (release.round_to_integer) {
    response.noisy_value = std::round(response.noisy_value);
  }
  if (release.clamp_at_zero && response.noisy_value < 0) {
    response.noisy_value = 0;
  }
  return response;
}

}  // namespace

std::string ToAnalystJson(const NoisyResponse& response) {
  nlohmann::ordered_json json;
  json["query_id"] = response.query_id;
  json["noisy_value"] = response.noisy_value;
  json["epsilon_charged"] = response.epsilon_charged;
  return json.dump();
}

absl::StatusOr<int64_t> TrueCount(const Dataset& dataset,
                                  const CountPredicate& predicate) {
  absl::StatusOr<BoundPredicate> bound =
      BoundPredicate::Bind(predicate, dataset);
  if (!bound.ok()) return bound.status();
  return CountMatches(dataset, *bound);
}

absl::StatusOr<NoisyResponse> NoisyCount(const Dataset& dataset,
                                         const CountPredicate& predicate,
                                         PrivacyLevel level,
                                         SeededUniform& sampler,
                                         BudgetLedger& ledger,
                                         const ReleaseOptions& release) {
  absl::StatusOr<int64_t> count = TrueCount(dataset, predicate);
  if (!count.ok()) return count.status();
  return Release(*count, level, sampler, ledger, release);
}

absl::StatusOr<NoisyResponse> CalibratedNoisyCount(
    const Dataset& dataset, const CountPredicate& predicate,
    const ConfidenceSpec& spec, SeededUniform& sampler, BudgetLedger& ledger,
    const CalibrationOptions& options) {
  absl::StatusOr<int64_t> count = TrueCount(dataset, predicate);
  if (!count.ok()) return count.status();

  absl::StatusOr<ReferenceCount> reference =
      options.public_reference.has_value()
          ? absl::StatusOr<ReferenceCount>(*options.public_reference)
          : ReferenceCount::Create(static_cast<double>(*count));
  if (!reference.ok()) {
    return absl::FailedPreconditionError(
        "cannot calibrate epsilon against a true count of 0; supply a public "
        "reference count or an explicit epsilon");
  }
  absl::StatusOr<PrivacyLevel> level = EpsilonFor(spec, *reference);
  if (!level.ok()) return level.status();
  return Release(*count, *level, sampler, ledger, options.release);
}

}  // namespace dpcalib
