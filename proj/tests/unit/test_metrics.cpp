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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "driftgen/metrics.hpp"
#include "helpers.hpp"
#include "schemas.hpp"

namespace driftgen {
namespace {

struct KsCase {
  std::vector<double> a;
  std::vector<double> b;
  double statistic;
};

const std::vector<KsCase>& ks_oracle() {
  static const std::vector<KsCase> cases = {
#include "ks_oracle.inc"
  };
  return cases;
}

TEST(Ks, MatchesScipyOracle) {
  ASSERT_GE(ks_oracle().size(), 60u);
  for (const auto& c : ks_oracle()) EXPECT_NEAR(ks_statistic(c.a, c.b), c.statistic, 1e-12);
}

TEST(Ks, IdentityAndBoundaries) {
  std::vector<double> a{1, 2, 3}, b{2, 3, 4}, far{10, 11};
  EXPECT_DOUBLE_EQ(ks_statistic(a, b), 1.0 / 3.0);
  EXPECT_EQ(ks_statistic(a, a), 0.0);
  EXPECT_EQ(ks_statistic(a, far), 1.0);
  EXPECT_EQ(ks_statistic(a, b), ks_statistic(b, a));
  std::vector<double> empty;
  EXPECT_THROW(ks_statistic(a, empty), Error);
}

TEST(Tv, ValuesAndValidation) {
  Frequencies p{{"a", 0.5}, {"b", 0.5}}, q{{"a", 0.75}, {"b", 0.25}}, r{{"c", 1.0}};
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.25);
  EXPECT_EQ(tv_distance(p, p), 0.0);
  EXPECT_EQ(tv_distance(p, r), 1.0);
  EXPECT_THROW(tv_distance(p, Frequencies{{"a", 0.5}}), Error);
  EXPECT_THROW(tv_distance(p, Frequencies{{"a", 1.5}, {"b", -0.5}}), Error);
  std::vector<std::string> xs{"a", "b", "b", "b"};
  auto f = frequencies_of(std::span<const std::string>(xs));
  EXPECT_EQ(f.at("b"), 0.75);
}

TEST(QError, Values) {
  EXPECT_EQ(q_error(10, 100), 10.0);
  EXPECT_EQ(q_error(100, 10), 10.0);
  EXPECT_EQ(q_error(7, 7), 1.0);
  EXPECT_EQ(q_error(0, 0), 1.0);
  EXPECT_EQ(q_error(0, 5), 5.0);
  EXPECT_EQ(q_error(0.5, 4), 4.0);
  EXPECT_THROW(q_error(-1, 3), Error);
  EXPECT_THROW(q_error(std::numeric_limits<double>::quiet_NaN(), 3), Error);
}

TEST(CardinalityDrift, StrictThreshold) {
  auto r = check_cardinality_drift(100, 120, 0.2);
  EXPECT_FALSE(r.verdict);
  EXPECT_DOUBLE_EQ(r.magnitude, 0.2);
  EXPECT_TRUE(check_cardinality_drift(100, 121, 0.2).verdict);
  EXPECT_TRUE(check_cardinality_drift(100, 79, 0.2).verdict);
  EXPECT_EQ(check_cardinality_drift(100, 100, 0.2).kind, DriftKind::kCardinality);
  EXPECT_THROW(check_cardinality_drift(0, 5, 0.2), Error);
  EXPECT_THROW(check_cardinality_drift(5, 5, 0.0), Error);
}

TEST(DistributionalDrift, PerColumnDivergence) {
  Table a("t", {test::numeric_column("x", {1, 2, 3, 4}), test::text_column("c", {"a", "a", "b", "b"})});
  Table b("t", {test::numeric_column("x", {3, 4, 5, 6}), test::text_column("c", {"a", "b", "b", "b"})});
  auto schema = extract_schema(a);
  auto same = check_distributional_drift(a, a, schema, 0.05);
  EXPECT_FALSE(same.verdict);
  EXPECT_EQ(same.magnitude, 0.0);
  auto r = check_distributional_drift(a, b, schema, 0.05);
  EXPECT_TRUE(r.verdict);
  EXPECT_DOUBLE_EQ(r.per_column_divergence.at("x"), 0.5);
  EXPECT_DOUBLE_EQ(r.per_column_divergence.at("c"), 0.25);
  EXPECT_DOUBLE_EQ(r.magnitude, 0.5);
  EXPECT_FALSE(check_distributional_drift(a, b, schema, 0.5).verdict);  // strict
  Table other("t", {test::numeric_column("y", {1})});
  EXPECT_THROW(check_distributional_drift(a, other, schema, 0.05), Error);
}

TEST(LocalDrift, CountsValuesOutsideObservedRange) {
  Table a("t", {test::numeric_column("x", test::iota_values(10, 100))});
  auto b = a;
  b.append_rows(Table("t", {test::numeric_column("x", {1, 500})}));
  auto schema = extract_schema(a);
  auto r = check_local_drift(a, b, schema);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.details.at("outlier_count.x"), 2.0);
  EXPECT_DOUBLE_EQ(r.magnitude, 2.0 / 102.0);
  EXPECT_FALSE(check_local_drift(a, a, schema).verdict);
}

// --- exact oracle on a table small enough to enumerate by hand -------------

Table ten_rows() {
  return Table("t", {test::numeric_column("x", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}),
                     test::text_column("c", {"a", "b", "a", "c", "a", "b", "a", "c", "a", "b"})});
}

QueryTemplate xc_template() {
  QueryTemplate t;
  t.tables = {"t"};
  t.payload = {{"t", "x"}};
  PredicateSlot x, c;
  x.column = {"t", "x"};
  c.column = {"t", "c"};
  c.kind = PredicateKind::kEquality;
  c.type = LogicalType::kCategorical;
  t.predicates = {x, c};
  assign_id(t);
  return t;
}

QueryInstance query(double lo, double hi, std::string v) {
  QueryInstance q;
  q.bindings = {RangeBinding{lo, hi}, EqualityBinding{std::move(v)}};
  return q;
}

TEST(TrueSelectivity, HandEnumeration) {
  std::vector<Table> tables{ten_rows()};
  std::vector<TableSchema> schemas{extract_schema(tables[0])};
  auto t = xc_template();
  // a at x in {1,3,5,7,9}; b at {2,6,10}; c at {4,8}
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, t, query(1, 10, "a")), 0.5);
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, t, query(2.5, 7, "a")), 0.3);
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, t, query(4, 4, "c")), 0.1);
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, t, query(4.5, 5.5, "c")), 0.0);
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, t, query(1, 10, "zzz")), 0.0);
  QueryTemplate bare = t;
  bare.predicates.clear();
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, bare, QueryInstance{}), 1.0);
}

TEST(TrueSelectivity, NullsNeverMatch) {
  Table t("t", {Column{"x", {Cell{"1"}, Cell{}, Cell{"3"}, Cell{"4"}}}});
  std::vector<Table> tables{t};
  std::vector<TableSchema> schemas{extract_schema(t)};
  QueryTemplate tpl;
  tpl.tables = {"t"};
  tpl.payload = {{"t", "x"}};
  PredicateSlot s;
  s.column = {"t", "x"};
  tpl.predicates = {s};
  assign_id(tpl);
  QueryInstance q;
  q.bindings = {RangeBinding{0, 100}};
  EXPECT_DOUBLE_EQ(true_selectivity(tables, schemas, tpl, q), 0.75);
}

TEST(TrueSelectivity, JoinAndRowCap) {
  std::vector<Table> tables{test::customers_table(), test::orders_table()};
  auto schemas = test::two_schemas();
  QueryTemplate t;
  t.tables = {"customers", "orders"};
  t.payload = {{"customers", "age"}};
  t.joins = {{{"customers", "cust_id"}, {"orders", "customer_id"}, 0.78}};
  PredicateSlot s;
  s.column = {"orders", "amount"};
  t.predicates = {s};
  assign_id(t);
  QueryInstance q;
  q.bindings = {RangeBinding{0, 1e9}};
  // enumerate the join by hand
  std::size_t joined = 0, matching = 0;
  const auto& ids = tables[1].column("customer_id").values;
  for (const auto& v : ids) {
    double id = std::stod(*v);
    if (id <= 20) ++joined;
  }
  matching = joined;
  ScanOracle oracle(tables, schemas);
  EXPECT_EQ(oracle.relation(t).row_count(), joined);
  EXPECT_DOUBLE_EQ(oracle.selectivity(t, q), static_cast<double>(matching) / static_cast<double>(joined));
  q.bindings = {RangeBinding{10, 20}};  // amounts 10, 12.5, 15, 17.5, 20 -> rows 0..4
  std::size_t small = 0;
  for (std::size_t i = 0; i < 5; ++i)
    if (std::stod(*ids[i]) <= 20) ++small;
  EXPECT_DOUBLE_EQ(oracle.cardinality(t, q), static_cast<double>(small));
  EXPECT_THROW(Relation::build(tables, schemas, t, 10), Error);
}

TEST(HistogramEstimate, EqualsOracleOnBucketAlignedRanges) {
  Table t("t", {test::numeric_column("x", test::iota_values(1, 100))});
  std::vector<Table> tables{t};
  std::vector<TableSchema> schemas{extract_schema(t, 10)};
  QueryTemplate tpl;
  tpl.tables = {"t"};
  tpl.payload = {{"t", "x"}};
  PredicateSlot s;
  s.column = {"t", "x"};
  tpl.predicates = {s};
  assign_id(tpl);
  const auto& bounds = schemas[0].columns[0].histogram_bounds;
  ASSERT_EQ(bounds.size(), 11u);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j <= 10; ++j) {
      QueryInstance q;
      double lo = i == 0 ? bounds[0] : bounds[i] + 1;
      q.bindings = {RangeBinding{lo, bounds[j]}};
      EXPECT_DOUBLE_EQ(histogram_estimate(schemas, tpl, q), true_selectivity(tables, schemas, tpl, q) * 100);
    }
  }
}

TEST(HistogramEstimate, EqualityUsesTopKThenResidual) {
  auto table = ten_rows();
  auto schema = extract_schema(table, 5, 1);  // top-1 is "a" (0.5)
  const auto& c = schema.at("c");
  EXPECT_DOUBLE_EQ(histogram_equality_fraction(c, "a"), 0.5);
  EXPECT_DOUBLE_EQ(histogram_equality_fraction(c, "b"), 0.25);  // (1 - 0.5) / 2
  EXPECT_DOUBLE_EQ(histogram_range_fraction(schema.at("x"), 11, 20), 0.0);
  EXPECT_DOUBLE_EQ(histogram_range_fraction(schema.at("x"), 5, 4), 0.0);
  EXPECT_DOUBLE_EQ(histogram_range_fraction(schema.at("x"), -1e9, 1e9), 1.0);
}

// --- workload drift ---------------------------------------------------------

TEST(WorkloadDrift, StructuralParametricNone) {
  Table table("u", {test::numeric_column("x", test::iota_values(0, 1000))});
  std::vector<TableSchema> schemas{extract_schema(table)};
  QueryTemplate t;
  t.tables = {"u"};
  t.payload = {{"u", "x"}};
  PredicateSlot s;
  s.column = {"u", "x"};
  t.predicates = {s};
  assign_id(t);
  QueryTemplate bare = t;
  bare.predicates.clear();
  assign_id(bare);
  std::vector<QueryTemplate> ts{t, bare};
  auto idx = index_templates(ts);
  ScanOracle oracle({table}, schemas);

  std::vector<SlotSampler> low{CenterSampler::uniform(0, 300)}, high{CenterSampler::uniform(600, 999)};
  std::vector<double> widths{20};
  auto a = instantiate(t, low, widths, 200, 1);
  auto a2 = instantiate(t, low, widths, 200, 2);
  auto b = instantiate(t, high, widths, 200, 1);
  auto none = verify_workload_drift(a, a2, idx, oracle, {});
  EXPECT_EQ(none.kind, DriftKind::kNone);
  EXPECT_FALSE(none.verdict);
  auto param = verify_workload_drift(a, b, idx, oracle, {});
  EXPECT_EQ(param.kind, DriftKind::kParametric);
  EXPECT_TRUE(param.verdict);
  EXPECT_GT(param.magnitude, param.threshold_used);

  std::vector<Binding> nob;
  Workload other(200);
  for (auto& q : other) q.template_id = bare.id;
  auto structural = verify_workload_drift(a, other, idx, oracle, {});
  EXPECT_EQ(structural.kind, DriftKind::kStructural);
  EXPECT_TRUE(structural.verdict);
  EXPECT_EQ(structural.magnitude, 1.0);
  EXPECT_THROW(verify_workload_drift(a, Workload{}, idx, oracle, {}), Error);
}

TEST(WorkloadDrift, SelectivityBranchAlone) {
  Table table("u", {test::numeric_column("x", test::iota_values(0, 1000))});
  std::vector<TableSchema> schemas{extract_schema(table)};
  QueryTemplate t;
  t.tables = {"u"};
  t.payload = {{"u", "x"}};
  PredicateSlot s;
  s.column = {"u", "x"};
  t.predicates = {s};
  assign_id(t);
  std::vector<QueryTemplate> ts{t};
  auto idx = index_templates(ts);
  ScanOracle oracle({table}, schemas);
  std::vector<SlotSampler> same{CenterSampler::uniform(100, 900)};
  std::vector<double> narrow{10}, wide{20};
  auto a = instantiate(t, same, narrow, 200, 1);
  auto b = instantiate(t, same, wide, 200, 1);  // identical centers, twice the width
  auto r = verify_workload_drift(a, b, idx, oracle, {0.5, 0.1});
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.details.at("parameter_branch"), 0.0);
  EXPECT_EQ(r.threshold_used, 0.5);
  EXPECT_GT(r.magnitude, 0.5);
}

}  // namespace
}  // namespace driftgen
