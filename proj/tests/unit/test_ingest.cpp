// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "driftgen/ingest.hpp"

namespace driftgen {
namespace {

TEST(Csv, ParsesQuotedFieldsAndNulls) {
  auto t = parse_csv("a,b,c\n1,\"x, y\",\n2,\"he said \"\"hi\"\"\",\"\"\n", {}, "t");
  ASSERT_EQ(t.row_count(), 2u);
  EXPECT_EQ(t.column("b").values[0], "x, y");
  EXPECT_EQ(t.column("b").values[1], "he said \"hi\"");
  // unquoted empty field equals the null token; a quoted empty field is a value
  EXPECT_FALSE(t.column("c").values[0].has_value());
  EXPECT_EQ(t.column("c").values[1], "");
}

TEST(Csv, CrLfAndEmbeddedNewlines) {
  auto t = parse_csv("a,b\r\n1,\"two\nlines\"\r\n", {}, "t");
  ASSERT_EQ(t.row_count(), 1u);
  EXPECT_EQ(t.column("b").values[0], "two\nlines");
}

TEST(Csv, RaggedRowIsAnError) {
  try {
    parse_csv("a,b\n1,2\n3\n", {}, "t");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Csv, OptionsDelimiterHeaderNull) {
  CsvOptions o = CsvOptions::from_map({{"delimiter", ";"}, {"header", "false"}, {"null", "NA"}});
  auto t = parse_csv("1;NA\n2;x\n", o, "t");
  EXPECT_EQ(t.column_names(), (std::vector<std::string>{"col0", "col1"}));
  EXPECT_FALSE(t.column("col1").values[0].has_value());
  EXPECT_EQ(render_csv(t, CsvOptions::from_map({{"delimiter", ";"}, {"null", "NA"}})), "col0;col1\n1;NA\n2;x\n");
  EXPECT_THROW(CsvOptions::from_map({{"delimiter", "ab"}}), Error);
}

TEST(Csv, RoundTripPreservesEveryCell) {
  Table t("t", {Column{"a", {Cell{"plain"}, Cell{}, Cell{""}, Cell{" padded "}, Cell{"q\"uote"}, Cell{"x,y"}}},
                Column{"b", {Cell{"1"}, Cell{"2"}, Cell{"3"}, Cell{"4"}, Cell{"line\nbreak"}, Cell{}}}});
  for (auto null : {std::string(""), std::string("NULL")}) {
    CsvOptions o;
    o.null_token = null;
    auto text = render_csv(t, o);
    EXPECT_EQ(parse_csv(text, o, "t"), t) << text;
    EXPECT_EQ(render_csv(parse_csv(text, o, "t"), o), text);
  }
}

TEST(Sources, MissingFileAndRelationalStub) {
  EXPECT_THROW(open_source({SourceKind::kCsv, "/nonexistent/file.csv", {}}), Error);
  EXPECT_THROW(open_source({SourceKind::kRelationalStub, "postgres://x", {}}), NotImplemented);
  EXPECT_EQ(source_kind_from_string("relational-stub"), SourceKind::kRelationalStub);
  EXPECT_THROW(source_kind_from_string("parquet"), Error);
}

TEST(Sources, CsvFileNameBecomesTableName) {
  auto dir = std::filesystem::temp_directory_path() / "driftgen_ingest_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "people.csv";
  std::ofstream(path) << "id,name\n1,ann\n";
  auto t = open_source({SourceKind::kCsv, path.string(), {}});
  EXPECT_EQ(t.name(), "people");
  auto named = open_source({SourceKind::kCsv, path.string(), {{"name", "p"}}});
  EXPECT_EQ(named.name(), "p");
  write_table(t, dir / "copy.csv");
  EXPECT_EQ(open_source({SourceKind::kCsv, (dir / "copy.csv").string(), {{"name", "people"}}}), t);
}

}  // namespace
}  // namespace driftgen
