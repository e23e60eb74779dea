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

#include <sstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dpcalib {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

absl::StatusOr<Dataset> Csv(const std::string& text) {
  std::istringstream in(text);
  return IngestCsv(in);
}

absl::StatusOr<Dataset> Jsonl(const std::string& text) {
  std::istringstream in(text);
  return IngestJsonLines(in);
}

TEST(IngestCsvTest, ThreeRows) {
  absl::StatusOr<Dataset> data = Csv("age,city\n34,Rome\n51,Milan\n29,Rome\n");
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_THAT(data->schema(), ElementsAre("age", "city"));
  ASSERT_EQ(data->row_count(), 3u);
  EXPECT_EQ(data->row(1)[1].text, "Milan");
  EXPECT_EQ(*data->row(2)[0].number, 29);
  EXPECT_EQ(data->column_type(0), ColumnType::kNumeric);
  EXPECT_EQ(data->column_type(1), ColumnType::kText);
}

TEST(IngestCsvTest, HeaderOnly) {
  absl::StatusOr<Dataset> data = Csv("age,city\n");
  ASSERT_TRUE(data.ok());
  EXPECT_EQ(data->row_count(), 0u);
  EXPECT_EQ(data->schema().size(), 2u);
}

TEST(IngestCsvTest, RaggedRowNamesTheRow) {
  absl::StatusOr<Dataset> data = Csv("age,city\n34,Rome\n51\n");
  ASSERT_FALSE(data.ok());
  EXPECT_THAT(data.status().message(), HasSubstr("row 2"));
  EXPECT_THAT(data.status().message(), HasSubstr("line 3"));
}

TEST(IngestCsvTest, HeaderErrors) {
  EXPECT_THAT(Csv("").status().message(), HasSubstr("empty header"));
  EXPECT_THAT(Csv("\n1\n").status().message(), HasSubstr("empty header"));
  EXPECT_THAT(Csv("a,b,a\n1,2,3\n").status().message(), HasSubstr("duplicate"));
  EXPECT_THAT(Csv("a,,c\n").status().message(), HasSubstr("empty name"));
}

TEST(IngestCsvTest, Rfc4180Quoting) {
  absl::StatusOr<Dataset> data = Csv(
      "\xEF\xBB\xBFname,note\r\n"
      "\"Rossi, Mario\",\"said \"\"hi\"\"\"\r\n"
      "Bianchi,\"two\nlines\"\r\n");
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_THAT(data->schema(), ElementsAre("name", "note"));
  ASSERT_EQ(data->row_count(), 2u);
  EXPECT_EQ(data->row(0)[0].text, "Rossi, Mario");
  EXPECT_EQ(data->row(0)[1].text, "said \"hi\"");
  EXPECT_EQ(data->row(1)[1].text, "two\nlines");
}

TEST(IngestCsvTest, NoTrailingNewlineAndBlankLines) {
  absl::StatusOr<Dataset> data = Csv("a,b\n1,2\n\n3,4");
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_EQ(data->row_count(), 2u);
  EXPECT_EQ(data->row(1)[1].text, "4");
}

TEST(IngestCsvTest, MalformedQuotes) {
  EXPECT_THAT(Csv("a\n\"open\n").status().message(), HasSubstr("unterminated"));
  EXPECT_THAT(Csv("a,b\n\"x\"y,2\n").status().message(),
              HasSubstr("after closing quote"));
}

TEST(IngestCsvTest, NumericDetection) {
  absl::StatusOr<Dataset> data = Csv("x,y\n1.5,7\n-2e3,n/a\n+4,\n");
  ASSERT_TRUE(data.ok());
  EXPECT_EQ(data->column_type(0), ColumnType::kNumeric);
  EXPECT_EQ(data->column_type(1), ColumnType::kText);
  EXPECT_EQ(*data->row(1)[0].number, -2000);
  EXPECT_EQ(*data->row(2)[0].number, 4);
  EXPECT_FALSE(data->row(2)[1].number.has_value());
}

TEST(IngestJsonLinesTest, FlatObjects) {
  absl::StatusOr<Dataset> data = Jsonl(
      "{\"age\": 34, \"city\": \"Rome\"}\n"
      "\n"
      "{\"city\": \"Milan\", \"age\": 51}\n");
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_THAT(data->schema(), ElementsAre("age", "city"));
  ASSERT_EQ(data->row_count(), 2u);
  EXPECT_EQ(*data->row(1)[0].number, 51);
  EXPECT_EQ(data->row(1)[1].text, "Milan");
}

TEST(IngestJsonLinesTest, Errors) {
  EXPECT_THAT(Jsonl("").status().message(), HasSubstr("empty header"));
  EXPECT_THAT(Jsonl("{\"a\":1}\n{\"a\":1,\"b\":2}\n").status().message(),
              HasSubstr("row 2 (line 2)"));
  EXPECT_THAT(Jsonl("{\"a\":1}\n{\"b\":1}\n").status().message(),
              HasSubstr("missing column 'a'"));
  EXPECT_THAT(Jsonl("{\"a\":[1]}\n").status().message(),
              HasSubstr("not a number or string"));
  EXPECT_THAT(Jsonl("[1,2]\n").status().message(), HasSubstr("not a JSON object"));
  EXPECT_THAT(Jsonl("{\"a\":1}\n{oops\n").status().message(),
              HasSubstr("line 2"));
}

TEST(DatasetTest, CreateValidatesRowWidth) {
  EXPECT_FALSE(Dataset::Create({"a", "b"}, {{Value::FromText("1")}}).ok());
  absl::StatusOr<Dataset> data =
      Dataset::Create({"a"}, {{Value::FromNumber(0.1)}});
  ASSERT_TRUE(data.ok());
  EXPECT_EQ(*data->row(0)[0].number, 0.1);
  EXPECT_EQ(data->ColumnIndex("a"), 0u);
  EXPECT_FALSE(data->ColumnIndex("z").has_value());
}

TEST(IngestFileTest, FixtureAndMissingFile) {
  absl::StatusOr<Dataset> data =
      IngestFile(DPCALIB_FIXTURE_DIR "/people.csv", DatasetFormat::kCsv);
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_EQ(data->row_count(), 1000u);
  EXPECT_THAT(data->schema(), ElementsAre("id", "age", "city", "income"));

  absl::StatusOr<Dataset> jsonl = IngestFile(
      DPCALIB_FIXTURE_DIR "/people_small.jsonl", DatasetFormat::kJsonLines);
  ASSERT_TRUE(jsonl.ok()) << jsonl.status();
  EXPECT_EQ(jsonl->row_count(), 20u);

  EXPECT_EQ(IngestFile("/nonexistent/file.csv", DatasetFormat::kCsv)
                .status()
                .code(),
            absl::StatusCode::kNotFound);
}

TEST(GuessFormatTest, ByExtension) {
  EXPECT_EQ(GuessFormat("a.jsonl"), DatasetFormat::kJsonLines);
  EXPECT_EQ(GuessFormat("a.NDJSON"), DatasetFormat::kJsonLines);
  EXPECT_EQ(GuessFormat("a.csv"), DatasetFormat::kCsv);
  EXPECT_EQ(GuessFormat("-"), DatasetFormat::kCsv);
}

}  // namespace
}  // namespace dpcalib
