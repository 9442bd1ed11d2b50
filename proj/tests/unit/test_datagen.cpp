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

#include <set>

#include <gtest/gtest.h>

#include "census.hpp"
#include "driftgen/datagen.hpp"
#include "driftgen/metrics.hpp"
#include "helpers.hpp"

namespace driftgen {
namespace {

using test::iota_values;
using test::numeric_column;
using test::text_column;

TEST(Kde, SilvermanOnOneToThousand) {
  // oracle: numpy std (ddof 0) and inverted-cdf quartiles of 1..1000
  auto xs = iota_values(1, 1000);
  auto s = fit_numeric(xs, 10000, 1);
  EXPECT_NEAR(s.bandwidth, 65.26069120289205, 1e-9);
  EXPECT_EQ(s.clip_low, 1.0);
  EXPECT_EQ(s.clip_high, 1000.0);
  EXPECT_EQ(s.training_points.size(), 1000u);
}

TEST(Kde, ConstantDataUsesFallbackBandwidth) {
  std::vector<double> xs{7, 7, 7};
  auto s = fit_numeric(xs, 10, 1);
  EXPECT_DOUBLE_EQ(s.bandwidth, 7e-6);
  for (double v : sample_numeric(s, 100, 3)) EXPECT_EQ(v, 7.0);
}

TEST(Kde, SubsampleCapAndDeterminism) {
  auto xs = iota_values(0, 5000);
  auto a = fit_numeric(xs, 100, 9);
  auto b = fit_numeric(xs, 100, 9);
  EXPECT_EQ(a.training_points.size(), 100u);
  EXPECT_EQ(a.training_points, b.training_points);
  auto da = sample_numeric(a, 50, 4), db = sample_numeric(b, 50, 4);
  EXPECT_EQ(da, db);
  for (double v : da) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 4999.0);
  }
  EXPECT_THROW(fit_numeric(std::vector<double>{1.0}, 10, 1), Error);
}

TEST(Categorical, SamplesFollowWeights) {
  CategoricalSampler s{{"a", "b"}, {3, 1}};
  auto xs = sample_categorical(s, 20000, 5);
  double a = static_cast<double>(std::count(xs.begin(), xs.end(), "a")) / 20000.0;
  EXPECT_NEAR(a, 0.75, 0.02);
  EXPECT_THROW(sample_categorical(CategoricalSampler{{"a"}, {0}}, 1, 1), Error);
  EXPECT_THROW(sample_categorical(CategoricalSampler{}, 1, 1), Error);
}

TEST(GenerateRows, MatchesSchemaMarginalsAndIsDeterministic) {
  auto t = testing::census_table(5000, 3);
  auto schema = extract_schema(t);
  auto g1 = generate_rows(schema, 5000, 11);
  auto g2 = generate_rows(schema, 5000, 11);
  EXPECT_EQ(g1, g2);
  EXPECT_EQ(g1.column_names(), t.column_names());
  auto report = check_distributional_drift(t, g1, schema, 0.05);
  EXPECT_FALSE(report.verdict) << report.magnitude;
  // exact null count: round(rate * n)
  auto nulls = std::count(g1.column("workclass").values.begin(), g1.column("workclass").values.end(), Cell{});
  EXPECT_EQ(static_cast<double>(nulls), std::round(schema.at("workclass").null_fraction * 5000));
}

TEST(GenerateRows, ColumnOrderDoesNotChangeValues) {
  Table t("t", {numeric_column("x", iota_values(0, 50)), numeric_column("y", iota_values(100, 50))});
  auto s = extract_schema(t);
  TableSchema reversed = s;
  std::reverse(reversed.columns.begin(), reversed.columns.end());
  auto a = generate_rows(s, 20, 5), b = generate_rows(reversed, 20, 5);
  EXPECT_EQ(a.column("x").values, b.column("x").values);
  EXPECT_EQ(a.column("y").values, b.column("y").values);
}

TEST(GenerateRows, IntegralColumnsStayIntegral) {
  Table t("t", {numeric_column("x", iota_values(0, 200))});
  auto g = generate_rows(extract_schema(t), 300, 2);
  for (const auto& v : g.column("x").values) {
    auto x = parse_number(*v);
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, std::floor(*x));
  }
}

TEST(ForeignKeys, ChildKeysComeFromParent) {
  Table parent("parent", {numeric_column("id", iota_values(1, 20))});
  Table child_src("child", {numeric_column("parent_id", iota_values(1, 10)), numeric_column("v", iota_values(0, 10))});
  auto child_schema = extract_schema(child_src);
  ForeignKeySpec fk{"parent_id", "parent", "id"};
  for (auto w : {KeyWeighting::kUniform, KeyWeighting::kFrequency}) {
    auto child = generate_child_table(parent, child_schema, fk, 500, 4, w);
    EXPECT_EQ(child.row_count(), 500u);
    std::set<std::string> keys;
    for (const auto& v : parent.column("id").values) keys.insert(*v);
    for (const auto& v : child.column("parent_id").values) EXPECT_TRUE(keys.count(*v)) << *v;
  }
  ForeignKeySpec bad{"parent_id", "parent", "missing"};
  EXPECT_THROW(generate_child_table(parent, child_schema, bad, 10, 1, KeyWeighting::kUniform), Error);
}

}  // namespace
}  // namespace driftgen
