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

#include "dpcalib/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include "absl/strings/string_view.h"
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace dpcalib {
namespace {

std::optional<double> ParseNumber(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value, std::chars_format::general);
  if (ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

absl::Status CheckHeader(const std::vector<std::string>& header) {
  if (header.empty()) return absl::InvalidArgumentError("empty header");
  std::set<absl::string_view> seen;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("header column ", i + 1, " has an empty name"));
    }
    if (!seen.insert(header[i]).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name '", header[i], "'"));
    }
  }
  return absl::OkStatus();
}

// Incremental RFC 4180 record reader.
class CsvReader {
 public:
  explicit CsvReader(std::istream& input) : input_(input) {
    if (input_.peek() == 0xEF) {
      char bom[3];
      input_.read(bom, 3);
      if (absl::string_view(bom, 3) != "\xEF\xBB\xBF") {
        input_.clear();
        input_.seekg(0);
      }
    }
  }

  // Returns false at end of input. `line` is the physical line on which the
  // returned record started.
  absl::StatusOr<bool> Next(std::vector<std::string>& fields, int& line) {
    fields.clear();
    if (input_.peek() == std::char_traits<char>::eof()) return false;
    line = line_ + 1;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;;) {
      const int ch = input_.get();
      if (ch == std::char_traits<char>::eof()) {
        if (quoted) {
          return absl::InvalidArgumentError(
              absl::StrCat("line ", line, ": unterminated quoted field"));
        }
        fields.push_back(std::move(field));
        ++line_;
        return true;
      }
      const char c = static_cast<char>(ch);
      if (quoted) {
        if (c == '"') {
          if (input_.peek() == '"') {
            input_.get();
            field.push_back('"');
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
      } else if (c == '\r' && input_.peek() == '\n') {
        continue;
      } else if (c == '\n') {
        fields.push_back(std::move(field));
        ++line_;
        return true;
      } else if (c == '"' && field.empty() && !after_quote) {
        quoted = true;
      } else if (after_quote) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_ + 1, ": unexpected character after closing quote"));
      } else {
        field.push_back(c);
      }
    }
  }

 private:
  std::istream& input_;
  int line_ = 0;
};

}  // namespace

Value Value::FromText(std::string text) {
  std::optional<double> number = ParseNumber(text);
  return Value{std::move(text), number};
}

Value Value::FromNumber(double number) {
  return Value{absl::StrFormat("%.17g", number), number};
}

absl::StatusOr<Dataset> Dataset::Create(std::vector<std::string> schema,
                                        std::vector<std::vector<Value>> rows) {
  if (absl::Status s = CheckHeader(schema); !s.ok()) return s;
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, " has ", rows[r].size(),
                       " fields, schema has ", schema.size()));
    }
  }
  Dataset dataset;
  dataset.column_types_.assign(schema.size(), ColumnType::kNumeric);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (!row[c].number.has_value()) {
        dataset.column_types_[c] = ColumnType::kText;
      }
    }
  }
  dataset.schema_ = std::move(schema);
  dataset.rows_ = std::move(rows);
  return dataset;
}

std::optional<size_t> Dataset::ColumnIndex(absl::string_view name) const {
  for (size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i] == name) return i;
  }
  return std::nullopt;
}

absl::StatusOr<Dataset> IngestCsv(std::istream& input) {
  CsvReader reader(input);
  std::vector<std::string> fields;
  int line = 0;
  absl::StatusOr<bool> more = reader.Next(fields, line);
  if (!more.ok()) return more.status();
  if (!*more || (fields.size() == 1 && fields[0].empty())) {
    return absl::InvalidArgumentError("empty header");
  }
  std::vector<std::string> schema = std::move(fields);
  if (absl::Status s = CheckHeader(schema); !s.ok()) return s;

  std::vector<std::vector<Value>> rows;
  for (int record = 1;; ++record) {
    more = reader.Next(fields, line);
    if (!more.ok()) return more.status();
    if (!*more) break;
    // A bare empty line carries no record.
    if (fields.size() == 1 && fields[0].empty() && schema.size() != 1) {
      --record;
      continue;
    }
    if (fields.size() != schema.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", record, " (line ", line, ") has ", fields.size(),
          " fields, expected ", schema.size()));
    }
    std::vector<Value> row;
    row.reserve(fields.size());
    for (auto& field : fields) row.push_back(Value::FromText(std::move(field)));
    rows.push_back(std::move(row));
  }
  return Dataset::Create(std::move(schema), std::move(rows));
}

absl::StatusOr<Dataset> IngestJsonLines(std::istream& input) {
  std::vector<std::string> schema;
  std::vector<std::vector<Value>> rows;
  std::string text;
  int line = 0;
  while (std::getline(input, text)) {
    ++line;
    if (absl::StripAsciiWhitespace(text).empty()) continue;
    nlohmann::ordered_json object =
        nlohmann::ordered_json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded() || !object.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line, ": not a JSON object"));
    }
    if (rows.empty() && schema.empty()) {
      for (const auto& [key, unused] : object.items()) schema.push_back(key);
      if (absl::Status s = CheckHeader(schema); !s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line, ": ", s.message()));
      }
    }
    if (object.size() != schema.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", rows.size() + 1, " (line ", line, ") has ",
                       object.size(), " fields, expected ", schema.size()));
    }
    std::vector<Value> row;
    row.reserve(schema.size());
    for (const std::string& column : schema) {
      auto it = object.find(column);
      if (it == object.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", rows.size() + 1, " (line ", line,
                         ") is missing column '", column, "'"));
      }
      if (it->is_number()) {
        row.push_back(Value::FromNumber(it->get<double>()));
      } else if (it->is_string()) {
        row.push_back(Value::FromText(it->get<std::string>()));
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", rows.size() + 1, " (line ", line,
                         "): column '", column, "' is not a number or string"));
      }
    }
    rows.push_back(std::move(row));
  }
  if (schema.empty()) {
    return absl::InvalidArgumentError("empty header: no records to infer schema");
  }
  return Dataset::Create(std::move(schema), std::move(rows));
}

absl::StatusOr<Dataset> Ingest(std::istream& input, DatasetFormat format) {
  switch (format) {
    case DatasetFormat::kCsv:
      return IngestCsv(input);
    case DatasetFormat::kJsonLines:
      return IngestJsonLines(input);
  }
  return absl::InvalidArgumentError("unknown dataset format");
}

absl::StatusOr<Dataset> IngestFile(const std::string& path,
                                   DatasetFormat format) {
  if (path == "-") return Ingest(std::cin, format);
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    return absl::NotFoundError(absl::StrCat("cannot open dataset '", path, "'"));
  }
  absl::StatusOr<Dataset> dataset = Ingest(file, format);
  if (!dataset.ok()) {
    return absl::Status(dataset.status().code(),
                        absl::StrCat(path, ": ", dataset.status().message()));
  }
  return dataset;
}

DatasetFormat GuessFormat(absl::string_view path) {
  if (absl::EndsWithIgnoreCase(path, ".jsonl") ||
      absl::EndsWithIgnoreCase(path, ".ndjson") ||
      absl::EndsWithIgnoreCase(path, ".json")) {
    return DatasetFormat::kJsonLines;
  }
  return DatasetFormat::kCsv;
}

}  // namespace dpcalib
