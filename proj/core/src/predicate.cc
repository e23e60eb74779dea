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

#include "dpcalib/predicate.h"

#include <array>
#include <string>
#include "absl/strings/string_view.h"
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"

namespace dpcalib {
namespace {

struct OperatorToken {
  absl::string_view symbol;
  Comparator comparator;
};

// Two-character operators first so "<=" is not read as "<".
constexpr std::array<OperatorToken, 7> kOperators = {{
    {"<=", Comparator::kLe},
    {">=", Comparator::kGe},
    {"!=", Comparator::kNe},
    {"=", Comparator::kEq},
    {"<", Comparator::kLt},
    {">", Comparator::kGt},
    {"~", Comparator::kContains},
}};

bool IsOrdering(Comparator comparator) {
  return comparator == Comparator::kLt || comparator == Comparator::kLe ||
         comparator == Comparator::kGt || comparator == Comparator::kGe;
}

}  // namespace

absl::string_view ComparatorSymbol(Comparator comparator) {
  for (const auto& token : kOperators) {
    if (token.comparator == comparator) return token.symbol;
  }
  return "?";
}

absl::StatusOr<CountPredicate> ParsePredicate(absl::string_view expression) {
  const size_t position = expression.find_first_of("=!<>~");
  if (position == absl::string_view::npos) {
    return absl::InvalidArgumentError(absl::StrCat(
        "predicate '", expression,
        "' has no operator; expected `column OP literal` with OP one of "
        "= != < <= > >= ~"));
  }
  const absl::string_view rest = expression.substr(position);
  const OperatorToken* match = nullptr;
  for (const auto& token : kOperators) {
    if (absl::StartsWith(rest, token.symbol)) {
      match = &token;
      break;
    }
  }
  if (match == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("predicate '", expression, "': unknown operator"));
  }
  const absl::string_view column =
      absl::StripAsciiWhitespace(expression.substr(0, position));
  absl::string_view literal =
      absl::StripAsciiWhitespace(rest.substr(match->symbol.size()));
  if (column.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("predicate '", expression, "' has no column name"));
  }
  if (literal.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("predicate '", expression, "' has no literal"));
  }

  CountPredicate predicate;
  predicate.column = std::string(column);
  predicate.comparator = match->comparator;
  if (literal.size() >= 2 && (literal.front() == '"' || literal.front() == '\'') &&
      literal.back() == literal.front()) {
    predicate.operand.text = std::string(literal.substr(1, literal.size() - 2));
  } else {
    predicate.operand = Value::FromText(std::string(literal));
  }
  return predicate;
}

absl::StatusOr<BoundPredicate> BoundPredicate::Bind(
    const CountPredicate& predicate, const Dataset& dataset) {
  const std::optional<size_t> column = dataset.ColumnIndex(predicate.column);
  if (!column.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown column '", predicate.column, "'"));
  }
  const bool numeric_column =
      dataset.column_type(*column) == ColumnType::kNumeric;
  const bool numeric_operand = predicate.operand.number.has_value();
  const absl::string_view symbol = ComparatorSymbol(predicate.comparator);

  if (predicate.comparator == Comparator::kContains) {
    if (numeric_column && dataset.row_count() > 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "'~' needs a text column; '", predicate.column, "' is numeric"));
    }
    return BoundPredicate(predicate, *column, /*numeric=*/false);
  }
  if (IsOrdering(predicate.comparator)) {
    if (!numeric_column) {
      return absl::InvalidArgumentError(absl::StrCat(
          "'", symbol, "' needs a numeric column; '", predicate.column,
          "' is text"));
    }
    if (!numeric_operand) {
      return absl::InvalidArgumentError(absl::StrCat(
          "'", symbol, "' needs a numeric literal, got '",
          predicate.operand.text, "'"));
    }
    return BoundPredicate(predicate, *column, /*numeric=*/true);
  }
  if (numeric_column && !numeric_operand && dataset.row_count() > 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("column '", predicate.column,
                     "' is numeric but literal '", predicate.operand.text,
                     "' is not a number"));
  }
  return BoundPredicate(predicate, *column, numeric_column && numeric_operand);
}

bool BoundPredicate::Matches(const std::vector<Value>& row) const {
  const Value& cell = row[column_];
  if (numeric_) {
    const double lhs = *cell.number;
    const double rhs = *predicate_.operand.number;
    switch (predicate_.comparator) {
      case Comparator::kEq: return lhs == rhs;
      case Comparator::kNe: return lhs != rhs;
      case Comparator::kLt: return lhs < rhs;
      case Comparator::kLe: return lhs <= rhs;
      case Comparator::kGt: return lhs > rhs;
      case Comparator::kGe: return lhs >= rhs;
      case Comparator::kContains: break;
    }
    return false;
  }
  switch (predicate_.comparator) {
    case Comparator::kEq: return cell.text == predicate_.operand.text;
    case Comparator::kNe: return cell.text != predicate_.operand.text;
    case Comparator::kContains:
      return absl::StrContains(cell.text, predicate_.operand.text);
    default: return false;
  }
}

}  // namespace dpcalib
