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

#ifndef DPCALIB_DATASET_H_
#define DPCALIB_DATASET_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"

namespace dpcalib {

// A single cell. `text` is the source spelling; `number` is set when the
// whole cell parses as a finite decimal number.
struct Value {
  std::string text;
  std::optional<double> number;

  static Value FromText(std::string text);
  static Value FromNumber(double number);
};

enum class ColumnType { kNumeric, kText };

// Immutable table of flat records. Every row carries exactly the schema's
// columns, in schema order. Safe to share across threads once built.
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(std::vector<std::string> schema,
                                        std::vector<std::vector<Value>> rows);

  const std::vector<std::string>& schema() const { return schema_; }
  size_t row_count() const { return rows_.size(); }
  const std::vector<Value>& row(size_t i) const { return rows_[i]; }

  std::optional<size_t> ColumnIndex(absl::string_view name) const;

  // A column is numeric when every cell is numeric; an empty dataset reports
  // kNumeric for all columns.
  ColumnType column_type(size_t column) const { return column_types_[column]; }

 private:
  Dataset() = default;

  std::vector<std::string> schema_;
  std::vector<ColumnType> column_types_;
  std::vector<std::vector<Value>> rows_;
};

enum class DatasetFormat { kCsv, kJsonLines };

// RFC 4180 CSV: first record is the header, quoted fields may contain commas,
// doubled quotes and line breaks; CRLF or LF line endings; a leading UTF-8
// BOM is ignored.
absl::StatusOr<Dataset> IngestCsv(std::istream& input);

// One flat JSON object per line. The first object's keys, in order, define
// the schema; values must be numbers or strings. Blank lines are skipped.
absl::StatusOr<Dataset> IngestJsonLines(std::istream& input);

absl::StatusOr<Dataset> Ingest(std::istream& input, DatasetFormat format);

// Reads `path`, or standard input when path is "-".
absl::StatusOr<Dataset> IngestFile(const std::string& path,
                                   DatasetFormat format);

// .jsonl / .ndjson / .json -> kJsonLines, anything else -> kCsv.
DatasetFormat GuessFormat(absl::string_view path);

}  // namespace dpcalib

#endif  // DPCALIB_DATASET_H_
