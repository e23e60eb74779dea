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

#include "dpcalib/budget_ledger.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "absl/numeric/int128.h"
#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/time/time.h"
#include "nlohmann/json.hpp"

namespace dpcalib {
namespace {

constexpr int kFractionBits = 64;
// Largest budget whose unit count fits comfortably in 128 bits.
constexpr double kMaxBudget = 1e15;

double UnitsToDouble(absl::uint128 units) {
  const double high = static_cast<double>(absl::Uint128High64(units));
  const double low = static_cast<double>(absl::Uint128Low64(units));
  return high + std::ldexp(low, -kFractionBits);
}

absl::Status CheckAmount(double amount, const char* what) {
  if (!std::isfinite(amount) || !(amount > 0.0) || amount > kMaxBudget) {
    return absl::InvalidArgumentError(absl::StrCat(
        what, " must be a positive number no larger than ", kMaxBudget,
        ", got ", amount));
  }
  return absl::OkStatus();
}

std::string QueryId(size_t ordinal) { return absl::StrFormat("q%06d", ordinal); }

}  // namespace

absl::uint128 BudgetLedger::ChargeUnits(double epsilon) {
  return absl::uint128(std::ceil(std::ldexp(epsilon, kFractionBits)));
}

absl::StatusOr<std::unique_ptr<BudgetLedger>> BudgetLedger::Create(
    double total_budget, Clock clock) {
  if (absl::Status s = CheckAmount(total_budget, "total budget"); !s.ok()) {
    return s;
  }
  const absl::uint128 units(
      std::floor(std::ldexp(total_budget, kFractionBits)));
  return std::unique_ptr<BudgetLedger>(new BudgetLedger(units, std::move(clock)));
}

absl::StatusOr<std::unique_ptr<BudgetLedger>> BudgetLedger::CreateFile(
    const std::string& path, double total_budget, Clock clock) {
  absl::StatusOr<std::unique_ptr<BudgetLedger>> ledger =
      Create(total_budget, std::move(clock));
  if (!ledger.ok()) return ledger.status();
  if (std::filesystem::exists(path)) {
    return absl::AlreadyExistsError(
        absl::StrCat("ledger '", path, "' already exists"));
  }
  std::ofstream out(path);
  nlohmann::ordered_json header;
  header["type"] = "budget";
  header["total_budget"] = total_budget;
  out << header.dump() << '\n';
  out.flush();
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot write ledger '", path, "'"));
  }
  (*ledger)->journal_path_ = path;
  return ledger;
}

absl::StatusOr<std::unique_ptr<BudgetLedger>> BudgetLedger::LoadFile(
    const std::string& path, Clock clock) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ledger '", path, "'"));
  }
  std::unique_ptr<BudgetLedger> ledger;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (absl::StripAsciiWhitespace(text).empty()) continue;
    const nlohmann::json record =
        nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    auto corrupt = [&](absl::string_view why) {
      return absl::DataLossError(
          absl::StrCat("ledger '", path, "' line ", line, ": ", why));
    };
    if (!record.is_object() || !record.contains("type")) {
      return corrupt("not a ledger record");
    }
    if (ledger == nullptr) {
      if (record["type"] != "budget" || !record.contains("total_budget") ||
          !record["total_budget"].is_number()) {
        return corrupt("first record must be the budget header");
      }
      absl::StatusOr<std::unique_ptr<BudgetLedger>> created =
          Create(record["total_budget"].get<double>(), clock);
      if (!created.ok()) return corrupt(created.status().message());
      ledger = *std::move(created);
      continue;
    }
    if (record["type"] != "charge" || !record.contains("epsilon") ||
        !record["epsilon"].is_number() || !record.contains("query_id") ||
        !record["query_id"].is_string()) {
      return corrupt("malformed charge record");
    }
    LedgerEntry entry;
    entry.query_id = record["query_id"].get<std::string>();
    entry.epsilon = record["epsilon"].get<double>();
    if (record.contains("timestamp") && record["timestamp"].is_string()) {
      std::string error;
      if (!absl::ParseTime(absl::RFC3339_full,
                           record["timestamp"].get<std::string>(),
                           &entry.timestamp, &error)) {
        return corrupt(absl::StrCat("bad timestamp: ", error));
      }
    }
    ledger->spent_units_ += ChargeUnits(entry.epsilon);
    if (ledger->spent_units_ > ledger->total_units_) {
      return corrupt("charges exceed the total budget");
    }
    ledger->entries_.push_back(std::move(entry));
  }
  if (ledger == nullptr) return absl::DataLossError(
      absl::StrCat("ledger '", path, "' has no budget header"));
  ledger->journal_path_ = path;
  return ledger;
}

absl::Status BudgetLedger::AppendToJournal(const LedgerEntry& entry) {
  if (!journal_path_.has_value()) return absl::OkStatus();
  std::ofstream out(*journal_path_, std::ios::app);
  nlohmann::ordered_json record;
  record["type"] = "charge";
  record["query_id"] = entry.query_id;
  record["epsilon"] = entry.epsilon;
  record["timestamp"] =
      absl::FormatTime(absl::RFC3339_full, entry.timestamp, absl::UTCTimeZone());
  out << record.dump() << '\n';
  out.flush();
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot append to ledger '", *journal_path_, "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> BudgetLedger::Charge(double epsilon) {
  if (!std::isfinite(epsilon) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("charge must be a positive number, got ", epsilon));
  }
  const absl::uint128 units = ChargeUnits(epsilon);
  std::lock_guard<std::mutex> lock(mutex_);
  const absl::uint128 remaining = total_units_ - spent_units_;
  if (units > remaining) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "privacy budget exhausted: requested epsilon %.17g, remaining %.17g",
        epsilon, UnitsToDouble(remaining)));
  }
  LedgerEntry entry{QueryId(entries_.size() + 1), epsilon, clock_()};
  if (absl::Status s = AppendToJournal(entry); !s.ok()) return s;
  spent_units_ += units;
  entries_.push_back(entry);
  return entry.query_id;
}

double BudgetLedger::total_budget() const { return UnitsToDouble(total_units_); }

absl::uint128 BudgetLedger::spent_units() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return spent_units_;
}

double BudgetLedger::Spent() const { return UnitsToDouble(spent_units()); }

double BudgetLedger::Remaining() const {
  return UnitsToDouble(total_units_ - spent_units());
}

std::vector<LedgerEntry> BudgetLedger::Entries() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_;
}

}  // namespace dpcalib
