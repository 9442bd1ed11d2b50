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

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "driftgen/metrics.hpp"
#include "driftgen/workloads.hpp"
#include "helpers.hpp"

namespace driftgen {
namespace {

Table uniform_table() {
  std::vector<std::string> color;
  for (int i = 0; i < 1000; ++i) color.push_back(i % 10 < 6 ? "red" : (i % 10 < 9 ? "green" : "blue"));
  return Table("u", {test::numeric_column("x", test::iota_values(0, 1000)), test::text_column("color", color)});
}

QueryTemplate x_template() {
  QueryTemplate t;
  t.tables = {"u"};
  t.payload = {{"u", "x"}};
  PredicateSlot s;
  s.column = {"u", "x"};
  t.predicates = {s};
  assign_id(t);
  return t;
}

TEST(CenterSampler, QuantilesAndDomain) {
  auto u = CenterSampler::uniform(0, 100);
  EXPECT_DOUBLE_EQ(u.quantile(0.25), 25.0);
  auto n = CenterSampler::normal(40, 10, 0, 100);
  EXPECT_NEAR(n.quantile(0.5), 40.0, 1e-12);
  EXPECT_NEAR(n.quantile(0.8413447460685429), 50.0, 1e-9);  // Phi(1)
  EXPECT_EQ(n.quantile(0.0), 0.0);                          // clamped to the domain
  auto z = CenterSampler::zipfian({7, 3, 5}, 1.0, 0, 10);
  // weights 1, 1/2, 1/3 -> cdf 6/11, 9/11, 1
  EXPECT_EQ(z.quantile(0.5), 7.0);
  EXPECT_EQ(z.quantile(0.6), 3.0);
  EXPECT_EQ(z.quantile(0.95), 5.0);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    double x = n.draw(rng);
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 100.0);
  }
}

TEST(CenterSampler, FromProfile) {
  auto schema = extract_schema(uniform_table());
  ParamSamplerSpec spec;
  spec.distribution = ParamDistribution::kNormal;
  auto s = make_center_sampler(schema.at("x"), spec);
  EXPECT_EQ(s.low(), 0.0);
  EXPECT_EQ(s.high(), 999.0);
  EXPECT_NEAR(s.quantile(0.5), 499.5, 1e-9);
  spec.domain = std::pair{100.0, 200.0};
  spec.distribution = ParamDistribution::kUniform;
  EXPECT_DOUBLE_EQ(make_center_sampler(schema.at("x"), spec).quantile(0.5), 150.0);
  EXPECT_THROW(make_center_sampler(schema.at("color"), spec), Error);
  spec.distribution = ParamDistribution::kFrequency;
  spec.domain.reset();
  EXPECT_THROW(make_center_sampler(schema.at("x"), spec), Error);
}

TEST(EqualitySampler, WeightsFollowSpec) {
  auto schema = extract_schema(uniform_table());
  ParamSamplerSpec freq;
  freq.distribution = ParamDistribution::kFrequency;
  auto s = make_equality_sampler(schema.at("color"), freq);
  ASSERT_EQ(s.values.front(), "red");
  EXPECT_EQ(s.quantile(0.59), "red");
  EXPECT_EQ(s.quantile(0.61), "green");
  EXPECT_EQ(s.quantile(0.95), "blue");
  ParamSamplerSpec uni;
  uni.distribution = ParamDistribution::kUniform;
  EXPECT_EQ(make_equality_sampler(schema.at("color"), uni).quantile(0.5), "green");
  ParamSamplerSpec normal;
  normal.distribution = ParamDistribution::kNormal;
  EXPECT_THROW(make_equality_sampler(schema.at("color"), normal), Error);
}

TEST(DrawLevels, StratifiedCoversEveryStratum) {
  Rng rng(9);
  auto u = detail::draw_levels(200, DrawMode::kStratified, rng);
  std::vector<int> hits(200, 0);
  for (double x : u) {
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    ++hits[static_cast<std::size_t>(x * 200)];
  }
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_FALSE(std::is_sorted(u.begin(), u.end()));
}

TEST(Instantiate, BindsWithinDomainAndIsDeterministic) {
  auto table = uniform_table();
  std::vector<TableSchema> schemas{extract_schema(table)};
  auto t = x_template();
  auto samplers = make_slot_samplers(t, schemas, {});
  std::vector<double> widths{50};
  auto w = instantiate(t, samplers, widths, 300, 42, 3);
  ASSERT_EQ(w.size(), 300u);
  for (const auto& q : w) {
    EXPECT_EQ(q.template_id, t.id);
    EXPECT_EQ(q.group_id, 3);
    const auto& r = std::get<RangeBinding>(q.bindings[0]);
    EXPECT_GE(r.low, 0.0);
    EXPECT_LE(r.high, 999.0);
    EXPECT_LE(r.high - r.low, 50.0 + 1e-9);
    EXPECT_NEAR(*q.centers[0], (r.low + r.high) / 2, r.high - r.low < 50 - 1e-9 ? 25.0 : 1e-9);
    EXPECT_EQ(q.sql, render_sql(t, q.bindings));
  }
  auto again = instantiate(t, samplers, widths, 300, 42, 3);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w[i].sql, again[i].sql);
  auto other = instantiate(t, samplers, widths, 300, 43, 3);
  EXPECT_NE(w[0].sql, other[0].sql);
}

TEST(Instantiate, RejectsMismatchedSamplers) {
  auto t = x_template();
  std::vector<SlotSampler> wrong{EqualitySampler{{"a"}, {1.0}}};
  std::vector<double> widths{1};
  EXPECT_THROW(instantiate(t, wrong, widths, 5, 1), Error);
  std::vector<SlotSampler> none;
  EXPECT_THROW(instantiate(t, none, widths, 5, 1), Error);
  std::vector<SlotSampler> ok{CenterSampler::uniform(0, 1)};
  std::vector<double> negative{-1};
  EXPECT_THROW(instantiate(t, ok, negative, 5, 1), Error);
}

TEST(VarySelectivity, WiderRangesSelectMore) {
  auto table = uniform_table();
  std::vector<TableSchema> schemas{extract_schema(table)};
  auto t = x_template();
  auto samplers = make_slot_samplers(t, schemas, {});
  std::vector<double> widths{10};
  auto w = vary_selectivity(t, samplers, widths, 0, {10, 20, 3}, 200, 7);
  ASSERT_EQ(w.size(), 600u);
  ScanOracle oracle({table}, schemas);
  std::vector<QueryTemplate> ts{t};
  auto rep = selectivity_report(w, index_templates(ts), oracle);
  ASSERT_EQ(rep.group_means.size(), 3u);
  EXPECT_LT(rep.group_means[0], rep.group_means[1]);
  EXPECT_LT(rep.group_means[1], rep.group_means[2]);
  EXPECT_THROW(vary_selectivity(t, samplers, widths, 1, {10, 20, 3}, 10, 7), Error);
  EXPECT_THROW(vary_selectivity(t, samplers, widths, 0, {0, 20, 3}, 10, 7), Error);
}

TEST(DriftWorkload, PhasesUseTheirOwnSamplers) {
  auto t = x_template();
  std::vector<SlotSampler> base{CenterSampler::uniform(0, 100)};
  std::vector<SlotSampler> drifted{CenterSampler::uniform(500, 600)};
  std::vector<double> widths{2};
  auto [a, b] = drift_workload(t, base, drifted, widths, 50, 1);
  for (const auto& q : a) EXPECT_LE(*q.centers[0], 100.0);
  for (const auto& q : b) EXPECT_GE(*q.centers[0], 500.0);
  EXPECT_EQ(a.front().group_id, 0);
  EXPECT_EQ(b.front().group_id, 1);
}

}  // namespace
}  // namespace driftgen
