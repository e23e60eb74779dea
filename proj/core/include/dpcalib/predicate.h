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

#ifndef DPCALIB_PREDICATE_H_
#define DPCALIB_PREDICATE_H_

#include <cstddef>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpcalib/dataset.h"

namespace dpcalib {

enum class Comparator { kEq, kNe, kLt, kLe, kGt, kGe, kContains };

absl::string_view ComparatorSymbol(Comparator comparator);

// A single-column counting condition, e.g. `age >= 40` or `city ~ "Rom"`.
//
// Type rules: ordering comparators need a numeric column and a numeric
// operand; `contains` needs a text column; eq/ne compare numerically on
// numeric columns and by spelling on text columns.
struct CountPredicate {
  std::string column;
  Comparator comparator = Comparator::kEq;
  Value operand;
};

// Parses `column OP literal` with OP in {=, !=, <, <=, >, >=, ~}. A literal
// wrapped in single or double quotes is always text.
absl::StatusOr<CountPredicate> ParsePredicate(absl::string_view expression);

// A predicate checked against a dataset's schema, ready to evaluate.
class BoundPredicate {
 public:
  static absl::StatusOr<BoundPredicate> Bind(const CountPredicate& predicate,
                                             const Dataset& dataset);

  bool Matches(const std::vector<Value>& row) const;

 private:
  BoundPredicate(const CountPredicate& predicate, size_t column, bool numeric)
      : predicate_(predicate), column_(column), numeric_(numeric) {}

  CountPredicate predicate_;
  size_t column_;
  bool numeric_;
};

}  // namespace dpcalib

#endif  // DPCALIB_PREDICATE_H_
