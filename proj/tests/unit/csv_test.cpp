// Copyright 2026 The JPT Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jpt/csv.hpp"
#include "jpt/error.hpp"

namespace jpt {
namespace {

Dataset ingest(const std::string& text, const SchemaOverride& overrides = {}) {
  std::istringstream in(text);
  return ingest_csv(in, overrides);
}

std::string error_of(const std::string& text) {
  try {
    ingest(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(CsvTest, InfersKindsAndSortedDomains) {
  const Dataset data = ingest("x,color,n\n1.5,Red,3\n-2,Blue,4\n0,Red,5\n");
  const Schema& s = data.schema();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_TRUE(s[0].is_numeric());
  EXPECT_TRUE(s[1].is_symbolic());
  EXPECT_EQ(s[1].domain(), (std::vector<std::string>{"Blue", "Red"}));
  EXPECT_TRUE(s[2].is_numeric());
  EXPECT_EQ(data.at(1, 1), 0.0);
  EXPECT_EQ(data.at(1, 0), -2.0);
}

TEST(CsvTest, OverridesWin) {
  const Dataset data = ingest("grade,x\n1,0.5\n3,0.25\n2,1\n", {{"grade", VariableKind::Symbolic}});
  EXPECT_TRUE(data.schema()[0].is_symbolic());
  EXPECT_EQ(data.schema()[0].domain(), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_THROW(ingest("c\nred\n", {{"c", VariableKind::Numeric}}), DataError);
  EXPECT_THROW(ingest("c\n1\n", {{"missing", VariableKind::Numeric}}), DataError);
}

TEST(CsvTest, QuotedFieldsAndBom) {
  const Dataset data = ingest("\xEF\xBB\xBF" "name,v\n\"a, \"\"quoted\"\"\nline\",1\nplain,2\n");
  EXPECT_EQ(data.schema()[0].name(), "name");
  EXPECT_EQ(data.schema()[0].domain()[0], "a, \"quoted\"\nline");
  EXPECT_EQ(data.size(), 2u);
}

TEST(CsvTest, ErrorsCiteLines) {
  EXPECT_NE(error_of("a,b\n1,2\n3\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("a,b\n1,\n").find("missing value"), std::string::npos);
  EXPECT_NE(error_of("a,a\n1,2\n").find("duplicate column"), std::string::npos);
  EXPECT_NE(error_of("a,b\n").find("no rows"), std::string::npos);
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
  EXPECT_NE(error_of("a\n\"open\n").find("unterminated"), std::string::npos);
}

TEST(CsvTest, WriteThenReadWithSchema) {
  const Dataset data = ingest("x,c\n0.1,b\n3.333333333333333,a\n");
  std::ostringstream out;
  write_csv(out, data);
  std::istringstream in(out.str());
  const Dataset back = ingest_csv_with_schema(in, data.schema());
  ASSERT_EQ(back.size(), data.size());
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t v = 0; v < 2; ++v) EXPECT_EQ(back.at(r, v), data.at(r, v));
  }
}

TEST(CsvTest, FixedSchemaRejectsForeignValues) {
  const Dataset data = ingest("x,c\n1,a\n2,b\n");
  std::istringstream unknown_label("x,c\n1,z\n");
  EXPECT_THROW(ingest_csv_with_schema(unknown_label, data.schema()), DataError);
  std::istringstream missing_column("x\n1\n");
  EXPECT_THROW(ingest_csv_with_schema(missing_column, data.schema()), DataError);
  std::istringstream reordered("c,x\nb,5\n");
  const Dataset back = ingest_csv_with_schema(reordered, data.schema());
  EXPECT_EQ(back.at(0, 0), 5.0);
  EXPECT_EQ(back.at(0, 1), 1.0);
}

TEST(CsvTest, SchemaOverrideFile) {
  const auto path = std::filesystem::temp_directory_path() / "jpt_override_test.json";
  {
    std::ofstream out(path);
    out << R"({"grade": "symbolic", "x": "numeric"})";
  }
  const SchemaOverride o = load_schema_override(path);
  EXPECT_EQ(o.at("grade"), VariableKind::Symbolic);
  {
    std::ofstream out(path);
    out << R"({"grade": "ordinal"})";
  }
  EXPECT_THROW(load_schema_override(path), DataError);
  std::filesystem::remove(path);
}

TEST(CsvTest, SplitRecord) {
  EXPECT_EQ(split_csv_record("a,\"b,c\",d", 1), (std::vector<std::string>{"a", "b,c", "d"}));
  EXPECT_EQ(split_csv_record(",", 1), (std::vector<std::string>{"", ""}));
}

}  // namespace
}  // namespace jpt
