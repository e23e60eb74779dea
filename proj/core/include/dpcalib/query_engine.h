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

#ifndef DPCALIB_QUERY_ENGINE_H_
#define DPCALIB_QUERY_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "dpcalib/budget_ledger.h"
#include "dpcalib/calibration.h"
#include "dpcalib/dataset.h"
#include "dpcalib/laplace.h"
#include "dpcalib/predicate.h"
#include "dpcalib/random.h"

namespace dpcalib {

// A released answer. `true_value` stays on the curator side: the analyst
// serialization below never includes it.
struct NoisyResponse {
  std::string query_id;
  double noisy_value = 0;
  double epsilon_charged = 0;
  int64_t true_value = 0;
};

// {"query_id": ..., "noisy_value": ..., "epsilon_charged": ...}
std::string ToAnalystJson(const NoisyResponse& response);

// Post-processing applied to the released value. Off by default so the
// output is exactly count + noise; either option is safe because
// post-processing cannot weaken the privacy guarantee.
struct ReleaseOptions {
  bool round_to_integer = false;
  bool clamp_at_zero = false;
};

// Where the calibration formula gets its count from. Without a public
// reference the exact (secret) count is used, which makes epsilon itself
// depend on the data.
struct CalibrationOptions {
  std::optional<ReferenceCount> public_reference;
  ReleaseOptions release;
};

absl::StatusOr<int64_t> TrueCount(const Dataset& dataset,
                                  const CountPredicate& predicate);

// Releases count + Laplace(level). The charge is taken before any noise is
// drawn; on refusal (ResourceExhausted) the sampler is not advanced and the
// ledger is unchanged. Invalid predicates fail before charging.
absl::StatusOr<NoisyResponse> NoisyCount(const Dataset& dataset,
                                         const CountPredicate& predicate,
                                         PrivacyLevel level,
                                         SeededUniform& sampler,
                                         BudgetLedger& ledger,
                                         const ReleaseOptions& release = {});

// Picks epsilon from an accuracy target and releases at that level. With the
// exact count as reference a zero count is refused (FailedPrecondition),
// since the formula is undefined there.
absl::StatusOr<NoisyResponse> CalibratedNoisyCount(
    const Dataset& dataset, const CountPredicate& predicate,
    const ConfidenceSpec& spec, SeededUniform& sampler, BudgetLedger& ledger,
    const CalibrationOptions& options = {});

inline double LedgerRemaining(const BudgetLedger& ledger) {
  return ledger.Remaining();
}

}  // namespace dpcalib

#endif  // DPCALIB_QUERY_ENGINE_H_
