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
#include "driftgen/templates.hpp"
#include "schemas.hpp"

namespace driftgen {
namespace {

QueryTemplate age_template() {
  QueryTemplate t;
  t.tables = {"census"};
  t.payload = {{"census", "age"}};
  PredicateSlot s;
  s.column = {"census", "age"};
  t.predicates = {s};
  assign_id(t);
  return t;
}

TEST(JoinInference, ThresholdAndTypeRules) {
  auto schemas = test::two_schemas();
  auto at_08 = infer_join_candidates(schemas, 0.8);
  EXPECT_TRUE(at_08.empty());  // cust_id ~ customer_id is 7/9 < 0.8
  auto at_07 = infer_join_candidates(schemas, 0.7);
  ASSERT_EQ(at_07.size(), 1u);
  EXPECT_EQ(at_07[0].left.qualified(), "customers.cust_id");
  EXPECT_EQ(at_07[0].right.qualified(), "orders.customer_id");
  EXPECT_DOUBLE_EQ(at_07[0].similarity, 0.7777777777777778);
}

TEST(JoinInference, SameNameDifferentTypeIsExcluded) {
  Table a("a", {test::numeric_column("id", {1, 2, 3}), test::text_column("order_date", {"2020-01-01", "2020-01-02", "2020-01-03"})});
  Table b("b", {test::numeric_column("id", {1, 2, 2}), test::numeric_column("order_date", {1, 2, 3})});
  std::vector<TableSchema> schemas{extract_schema(a), extract_schema(b)};
  auto edges = infer_join_candidates(schemas, 0.8);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].left.column, "id");
  EXPECT_EQ(edges[0].similarity, 1.0);
}

TEST(JoinInference, InvariantUnderSchemaOrder) {
  auto schemas = test::two_schemas();
  std::vector<TableSchema> swapped{schemas[1], schemas[0]};
  EXPECT_EQ(infer_join_candidates(schemas, 0.5), infer_join_candidates(swapped, 0.5));
}

TEST(GenerateTemplates, RespectsLimitsAndIsDeterministic) {
  auto schema = extract_schema(testing::census_table(500, 1));
  std::vector<TableSchema> schemas{schema};
  for (auto [p, c] : {std::pair{5u, 6u}, std::pair{7u, 8u}}) {
    TemplateConstraints k;
    k.max_predicates = p;
    k.max_payload = c;
    auto ts = generate_templates(schemas, k, 50, 3);
    ASSERT_EQ(ts.size(), 50u);
    for (const auto& t : ts) {
      EXPECT_GE(t.predicates.size(), 1u);
      EXPECT_LE(t.predicates.size(), p);
      EXPECT_GE(t.payload.size(), 1u);
      EXPECT_LE(t.payload.size(), c);
      std::set<ColumnRef> cols;
      for (const auto& s : t.predicates) cols.insert(s.column);
      EXPECT_EQ(cols.size(), t.predicates.size());  // without replacement
      EXPECT_NO_THROW(validate_template(t, schemas));
    }
    EXPECT_EQ(ts.front().id, generate_templates(schemas, k, 50, 3).front().id);
  }
  EXPECT_TRUE(generate_templates(schemas, {}, 0, 1).empty());
}

TEST(GenerateTemplates, JoinsAndFallback) {
  auto schemas = test::two_schemas();
  TemplateConstraints k;
  k.join_probability = 1.0;
  k.threshold = 0.7;
  auto joined = generate_templates(schemas, k, 10, 2);
  for (const auto& t : joined) {
    EXPECT_EQ(t.tables.size(), 2u);
    EXPECT_EQ(t.joins.size(), 1u);
    EXPECT_FALSE(t.join_fallback);
  }
  k.threshold = 0.95;
  for (const auto& t : generate_templates(schemas, k, 10, 2)) {
    EXPECT_EQ(t.tables.size(), 1u);
    EXPECT_TRUE(t.join_fallback);
  }
}

TEST(Mutation, DropAddPayloadToggle) {
  auto schemas = test::two_schemas();
  QueryTemplate t;
  t.tables = {"customers"};
  t.payload = {{"customers", "cust_id"}};
  PredicateSlot a, b;
  a.column = {"customers", "age"};
  b.column = {"customers", "segment"};
  b.kind = PredicateKind::kEquality;
  b.type = LogicalType::kCategorical;
  t.predicates = {a, b};
  assign_id(t);

  auto same = mutate_template(t, {}, schemas, 1);
  EXPECT_EQ(same.id, t.id);
  auto dropped = mutate_template(t, {1, 0, std::nullopt, false}, schemas, 1);
  EXPECT_EQ(dropped.predicates.size(), 1u);
  EXPECT_NE(dropped.id, t.id);
  auto all_gone = mutate_template(t, {5, 0, std::nullopt, false}, schemas, 1);
  EXPECT_TRUE(all_gone.predicates.empty());
  auto added = mutate_template(t, {0, 1, std::nullopt, false}, schemas, 1);
  EXPECT_EQ(added.predicates.size(), 3u);
  EXPECT_THROW(mutate_template(t, {0, 3, std::nullopt, false}, schemas, 1), Error);
  auto payload = mutate_template(t, {0, 0, std::vector<std::string>{"cust_id", "age", "signup"}, false}, schemas, 1);
  EXPECT_EQ(payload.payload.size(), 3u);
  auto joined = mutate_template(t, {0, 0, std::nullopt, true}, schemas, 1, 0.7);
  EXPECT_EQ(joined.tables.size(), 2u);
  auto unjoined = mutate_template(joined, {0, 0, std::nullopt, true}, schemas, 1, 0.7);
  EXPECT_EQ(unjoined.tables.size(), 1u);
  EXPECT_THROW(mutate_template(t, {0, 0, std::nullopt, true}, schemas, 1, 0.99), Error);
}

TEST(Mutation, RandomEditsStayValid) {
  auto schema = extract_schema(testing::census_table(300, 2));
  std::vector<TableSchema> schemas{schema};
  auto ts = generate_templates(schemas, {}, 30, 5);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    TemplateMutation m{i % 3, i % 2, std::nullopt, false};
    auto out = mutate_template(ts[i], m, schemas, i);
    EXPECT_NO_THROW(validate_template(out, schemas));
    EXPECT_EQ(out.id, structural_id(out));
  }
}

TEST(Features, LayoutAndCounts) {
  std::vector<std::string> universe{"census.age", "census.sex"};
  QueryTemplate t;
  t.tables = {"census"};
  t.payload = {{"census", "age"}};
  auto f = template_features(t, universe);
  EXPECT_EQ(f, (std::vector<double>{0, 0, 1, 1, 0, 0, 0, 0}));
  auto g = template_features(age_template(), universe);
  EXPECT_EQ(g, (std::vector<double>{1, 0, 1, 1, 1, 0, 1, 0}));
}

TEST(Sql, RenderingGrammar) {
  auto t = age_template();
  std::vector<Binding> b{RangeBinding{20, 30}};
  EXPECT_EQ(render_sql(t, b), "SELECT age FROM census WHERE age BETWEEN 20 AND 30");
  QueryTemplate none;
  none.tables = {"census"};
  none.payload = {{"census", "age"}};
  EXPECT_EQ(render_sql(none, std::vector<Binding>{}), "SELECT age FROM census");
  QueryTemplate eq = none;
  PredicateSlot s;
  s.column = {"census", "name"};
  s.kind = PredicateKind::kEquality;
  s.type = LogicalType::kCategorical;
  eq.predicates = {s};
  EXPECT_EQ(render_sql(eq, std::vector<Binding>{EqualityBinding{"O'Brien"}}),
            "SELECT age FROM census WHERE name = 'O''Brien'");
  EXPECT_THROW(render_sql(t), Error);  // unbound slot
  EXPECT_THROW(render_sql(t, std::vector<Binding>{EqualityBinding{"x"}}), Error);
}

TEST(Sql, JoinsAreQualified) {
  QueryTemplate t;
  t.tables = {"customers", "orders"};
  t.payload = {{"customers", "age"}};
  t.joins = {{{"customers", "cust_id"}, {"orders", "customer_id"}, 0.78}};
  EXPECT_EQ(render_sql(t, std::vector<Binding>{}),
            "SELECT customers.age FROM customers JOIN orders ON customers.cust_id = orders.customer_id");
}

}  // namespace
}  // namespace driftgen
