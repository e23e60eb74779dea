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

#ifndef DPCALIB_BUDGET_LEDGER_H_
#define DPCALIB_BUDGET_LEDGER_H_

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/numeric/int128.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/clock.h"
#include "absl/time/time.h"

namespace dpcalib {

struct LedgerEntry {
  std::string query_id;
  double epsilon = 0;
  absl::Time timestamp;
};

// Sequential-composition privacy budget: cumulative spend is the plain sum of
// per-query epsilon and may never exceed the total.
//
// Amounts are held as integer multiples of 2^-64 so that
// spent + remaining == total holds exactly after any sequence of charges.
// Charges round up to that grid and the total rounds down; for epsilon >=
// 2^-12 the conversion is exact.
//
// Charge() is atomic: the budget check, the journal write and the append
// happen under one lock, so concurrent callers cannot overdraw.
class BudgetLedger {
 public:
  using Clock = std::function<absl::Time()>;

  // In-memory ledger.
  static absl::StatusOr<std::unique_ptr<BudgetLedger>> Create(
      double total_budget, Clock clock = absl::Now);

  // Starts a new append-only JSON-lines journal at `path`. Fails if the file
  // already exists.
  static absl::StatusOr<std::unique_ptr<BudgetLedger>> CreateFile(
      const std::string& path, double total_budget, Clock clock = absl::Now);

  // Replays an existing journal; the reconstructed balance is exact.
  static absl::StatusOr<std::unique_ptr<BudgetLedger>> LoadFile(
      const std::string& path, Clock clock = absl::Now);

  BudgetLedger(const BudgetLedger&) = delete;
  BudgetLedger& operator=(const BudgetLedger&) = delete;

  // Reserves `epsilon` and returns the new query id. ResourceExhausted, with
  // the remaining budget in the message, if the charge does not fit; nothing
  // is recorded in that case.
  absl::StatusOr<std::string> Charge(double epsilon);

  double total_budget() const;
  double Spent() const;
  double Remaining() const;
  std::vector<LedgerEntry> Entries() const;

  // Exact balance on the 2^-64 grid.
  absl::uint128 total_units() const { return total_units_; }
  absl::uint128 spent_units() const;
  static absl::uint128 ChargeUnits(double epsilon);

 private:
  BudgetLedger(absl::uint128 total_units, Clock clock)
      : total_units_(total_units), clock_(std::move(clock)) {}

  absl::Status AppendToJournal(const LedgerEntry& entry);

  const absl::uint128 total_units_;
  Clock clock_;
  std::optional<std::string> journal_path_;

  mutable std::mutex mutex_;
  absl::uint128 spent_units_ = 0;
  std::vector<LedgerEntry> entries_;
};

}  // namespace dpcalib

#endif  // DPCALIB_BUDGET_LEDGER_H_
