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

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/datagen.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/table.hpp"

namespace driftgen {

enum class DriftOp { kScaleCardinality, kUpdateCardinality, kShiftDistribution, kInjectOutliers };

inline std::string to_string(DriftOp op) {
  switch (op) {
    case DriftOp::kScaleCardinality: return "scale_cardinality";
    case DriftOp::kUpdateCardinality: return "update_cardinality";
    case DriftOp::kShiftDistribution: return "shift_distribution";
    case DriftOp::kInjectOutliers: return "inject_outliers";
  }
  return "";
}

inline DriftOp drift_op_from_string(std::string_view s) {
  if (s == "scale_cardinality") return DriftOp::kScaleCardinality;
  if (s == "update_cardinality") return DriftOp::kUpdateCardinality;
  if (s == "shift_distribution") return DriftOp::kShiftDistribution;
  if (s == "inject_outliers") return DriftOp::kInjectOutliers;
  throw Error("unknown drift op '" + std::string(s) + "'");
}

/// alpha bounds relative cardinality change; epsilon bounds the divergence metric.
struct DriftThresholds {
  double alpha = 0.2;
  double epsilon = 0.1;

  void validate() const {
    if (!(alpha > 0.0)) throw Error("alpha must be > 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error("epsilon must be in (0, 1]");
  }

  /// Rebuild-on-20%-deletion policy.
  static DriftThresholds index_rebuild(double epsilon) { return DriftThresholds{0.2, epsilon}; }
};

struct ScaleParams {
  double factor = 1.0;
  bool regenerate = false;
};

struct UpdateParams {
  std::size_t insert_count = 0;
  double delete_fraction = 0.0;
  /// Delete proportionally within each category of this column instead of uniformly.
  std::optional<std::string> stratify_column;
};

/// Numeric targets use target_skewness; categorical targets use boost/top_m.
struct ShiftParams {
  std::optional<double> target_skewness;
  double boost = 1.0;
  std::size_t top_m = 1;
};

struct OutlierRule {
  std::size_t count = 1;
  double k = 3.0;
};

struct OutlierParams {
  std::vector<std::string> values;
  std::optional<OutlierRule> rule;
};

using DriftParams = std::variant<ScaleParams, UpdateParams, ShiftParams, OutlierParams>;

struct DriftSpec {
  DriftOp op = DriftOp::kScaleCardinality;
  std::vector<std::string> target_columns;
  DriftParams params;
  DriftThresholds thresholds;
};

struct ChangeLog {
  /// Ids of inserted rows, numbered after the input rows (n, n+1, ...).
  std::vector<std::size_t> inserted_row_indices;
  /// Input row indices removed by the operation.
  std::vector<std::size_t> deleted_row_indices;
  std::vector<std::string> modified_columns;
  DriftSpec op_applied;
  std::uint64_t seed = 0;
};

struct DriftOutcome {
  Table table;
  ChangeLog log;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::size_t> iota_range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v(to > from ? to - from : 0);
  std::iota(v.begin(), v.end(), from);
  return v;
}

/// k distinct indices from [0, n), sorted.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx = iota_range(0, n);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& sorted_removed) {
  std::vector<std::size_t> keep;
  keep.reserve(n - sorted_removed.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < sorted_removed.size() && sorted_removed[j] == i) {
      ++j;
      continue;
    }
    keep.push_back(i);
  }
  return keep;
}

inline double sample_skewness(const std::vector<double>& xs) {
  auto n = static_cast<double>(xs.size());
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

}  // namespace detail

/// Population skewness of the skew-normal family as a function of delta = a/sqrt(1+a^2).
inline double skew_normal_skewness(double delta) {
  using std::numbers::pi;
  double m = delta * std::sqrt(2.0 / pi);
  return (4.0 - pi) / 2.0 * (m * m * m) / std::pow(1.0 - m * m, 1.5);
}

/// Supremum of |skewness| reachable by the skew-normal family (delta -> 1).
inline double skew_normal_max_skewness() { return skew_normal_skewness(1.0); }

/// Inverts skew_normal_skewness on [0, 1) by bisection.
inline double skew_normal_delta_for(double skewness) {
  double target = std::abs(skewness);
  if (target >= skew_normal_max_skewness()) throw Error("skewness beyond the skew-normal maximum");
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (skew_normal_skewness(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Cardinality

/// factor < 1 subsamples without replacement; factor > 1 appends synthesized
/// rows; regenerate replaces the table with round(factor * n) synthesized rows.
inline DriftOutcome scale_cardinality(const Table& t, const TableSchema& schema, double factor, bool regenerate,
                                      std::uint64_t seed) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error("scale factor must be > 0");
  auto n = t.row_count();
  auto target = static_cast<std::size_t>(std::llround(factor * static_cast<double>(n)));
  DriftOutcome out;
  out.log.seed = seed;
  out.log.op_applied = DriftSpec{DriftOp::kScaleCardinality, {}, ScaleParams{factor, regenerate}, {}};

  if (regenerate) {
    out.table = generate_rows(schema, target, substream(seed, "regenerate"));
    out.table.set_name(t.name());
    out.log.deleted_row_indices = detail::iota_range(0, n);
    out.log.inserted_row_indices = detail::iota_range(n, n + target);
    return out;
  }
  if (target <= n) {
    auto rng = make_rng(seed, "subsample");
    auto keep = detail::sample_without_replacement(n, target, rng);
    out.log.deleted_row_indices = detail::complement(n, keep);
    out.table = t.select_rows(keep);
    return out;
  }
  out.table = t;
  auto extra = generate_rows(schema, target - n, substream(seed, "scale_up"));
  extra.set_name(t.name());
  out.table.append_rows(extra);
  out.log.inserted_row_indices = detail::iota_range(n, target);
  return out;
}

/// Uniform (distribution-proportional) deletion followed by synthesized insertions.
/// The result keeps floor((1 - delete_fraction) * n) input rows, in input order,
/// followed by the inserted rows.
inline DriftOutcome update_cardinality(const Table& t, const TableSchema& schema, const UpdateParams& params,
                                       std::uint64_t seed) {
  if (!(params.delete_fraction >= 0.0 && params.delete_fraction < 1.0))
    throw Error("delete_fraction must be in [0, 1)");
  auto n = t.row_count();
  auto keep_count = static_cast<std::size_t>(std::floor((1.0 - params.delete_fraction) * static_cast<double>(n) + 1e-9));
  keep_count = std::min(keep_count, n);
  std::size_t delete_count = n - keep_count;

  DriftOutcome out;
  out.log.seed = seed;
  out.log.op_applied = DriftSpec{DriftOp::kUpdateCardinality, {}, params, {}};

  std::vector<std::size_t> deleted;
  auto rng = make_rng(seed, "delete");
  if (params.stratify_column && delete_count > 0) {
    const auto& col = t.column(*params.stratify_column);
    std::map<Cell, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < n; ++i) strata[col.values[i]].push_back(i);
    // largest-remainder apportionment of the deletions across strata
    std::vector<std::pair<double, const Cell*>> remainders;
    std::map<const Cell*, std::size_t> quota;
    std::size_t assigned = 0;
    for (auto& [key, rows] : strata) {
      double exact = static_cast<double>(delete_count) * static_cast<double>(rows.size()) / static_cast<double>(n);
      auto q = static_cast<std::size_t>(std::floor(exact));
      quota[&key] = q;
      assigned += q;
      remainders.emplace_back(exact - static_cast<double>(q), &key);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < delete_count && i < remainders.size(); ++i, ++assigned) ++quota[remainders[i].second];
    for (auto& [key, rows] : strata) {
      auto picked = detail::sample_without_replacement(rows.size(), quota[&key], rng);
      for (auto p : picked) deleted.push_back(rows[p]);
    }
    std::sort(deleted.begin(), deleted.end());
  } else {
    deleted = detail::sample_without_replacement(n, delete_count, rng);
  }

  out.table = t.select_rows(detail::complement(n, deleted));
  out.log.deleted_row_indices = std::move(deleted);
  if (params.insert_count > 0) {
    auto extra = generate_rows(schema, params.insert_count, substream(seed, "insert"));
    extra.set_name(t.name());
    out.table.append_rows(extra);
    out.log.inserted_row_indices = detail::iota_range(n, n + params.insert_count);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distribution shift

/// Replaces a numeric column with skew-normal draws, affinely standardized so
/// the mean and (population) std equal the source column's exactly. Nulls stay
/// in place.
inline DriftOutcome skew_numeric(const Table& t, const std::string& column, double target_skewness, std::uint64_t seed) {
  if (!std::isfinite(target_skewness) || std::abs(target_skewness) >= 0.9952)
    throw Error("target skewness " + format_number(target_skewness) + " is beyond the skew-normal maximum (0.9952)");
  const auto& col = t.column(column);
  if (infer_logical_type(col.values) != LogicalType::kNumeric) throw Error("column '" + column + "' is not numeric");

  std::vector<double> src;
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < col.values.size(); ++i) {
    if (auto x = col.values[i] ? parse_number(*col.values[i]) : std::nullopt) {
      src.push_back(*x);
      positions.push_back(i);
    }
  }
  if (src.size() < 2) throw Error("column '" + column + "' needs at least 2 values to skew");
  auto [mn, mx] = std::minmax_element(src.begin(), src.end());
  if (*mn == *mx) throw Error("column '" + column + "' needs at least 2 distinct values to skew");

  auto n = static_cast<double>(src.size());
  double mean = std::accumulate(src.begin(), src.end(), 0.0) / n;
  double var = 0.0;
  for (double x : src) var += (x - mean) * (x - mean);
  double sd = std::sqrt(var / n);

  double sign = target_skewness < 0.0 ? -1.0 : 1.0;
  double goal = std::abs(target_skewness);
  std::vector<double> draws(src.size());
  bool reached = false;
  for (int attempt = 0; attempt < 32 && !reached; ++attempt) {
    // raise the population target if a finite sample fell short
    double population = std::min(goal + 0.02 * attempt, 0.995);
    double delta = skew_normal_delta_for(population);
    auto rng = make_rng(seed, "skew_numeric", column, attempt);
    std::normal_distribution<double> z(0.0, 1.0);
    double tail = std::sqrt(1.0 - delta * delta);
    for (auto& x : draws) {
      double z0 = z(rng), z1 = z(rng);
      x = sign * (delta * std::abs(z0) + tail * z1);
    }
    reached = std::abs(detail::sample_skewness(draws)) >= 0.9 * goal;
  }
  if (!reached) throw Error("could not reach skewness " + format_number(target_skewness) + " on column '" + column + "'");

  double dmean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double dvar = 0.0;
  for (double x : draws) dvar += (x - dmean) * (x - dmean);
  double dsd = std::sqrt(dvar / n);

  std::vector<Cell> values = col.values;
  for (std::size_t k = 0; k < draws.size(); ++k)
    values[positions[k]] = format_number(mean + sd * (draws[k] - dmean) / dsd);

  DriftOutcome out;
  out.table = t;
  out.table.replace_values(column, std::move(values));
  out.log.seed = seed;
  out.log.modified_columns = {column};
  ShiftParams sp;
  sp.target_skewness = target_skewness;
  out.log.op_applied = DriftSpec{DriftOp::kShiftDistribution, {column}, sp, {}};
  return out;
}

/// Category weights after multiplying the top_m most frequent by `boost` and
/// renormalizing. Input is (value, weight) in any order; output keeps that order.
inline std::vector<std::pair<std::string, double>> boosted_weights(std::vector<std::pair<std::string, double>> weights,
                                                                   double boost, std::size_t top_m) {
  if (!(boost >= 1.0)) throw Error("boost must be >= 1");
  std::vector<std::size_t> order = detail::iota_range(0, weights.size());
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (weights[a].second != weights[b].second) return weights[a].second > weights[b].second;
    return weights[a].first < weights[b].first;
  });
  for (std::size_t i = 0; i < order.size() && i < top_m; ++i) weights[order[i]].second *= boost;
  double total = 0.0;
  for (auto& w : weights) total += w.second;
  for (auto& w : weights) w.second /= total;
  return weights;
}

/// Resamples a categorical column with its most frequent categories up-weighted.
inline DriftOutcome skew_categorical(const Table& t, const std::string& column, double boost, std::size_t top_m,
                                     std::uint64_t seed) {
  const auto& col = t.column(column);
  if (infer_logical_type(col.values) != LogicalType::kCategorical)
    throw Error("column '" + column + "' is not categorical");
  std::vector<std::string> present;
  for (const auto& v : col.values)
    if (v) present.push_back(*v);
  std::sort(present.begin(), present.end());
  auto weights = boosted_weights(detail::frequency_table(present), boost, top_m);

  CategoricalSampler sampler;
  for (auto& [v, w] : weights) {
    sampler.values.push_back(v);
    sampler.weights.push_back(w);
  }
  auto rng = make_rng(seed, "skew_categorical", column);
  auto draws = sample_categorical(sampler, present.size(), rng);

  std::vector<Cell> values = col.values;
  std::size_t k = 0;
  for (auto& v : values)
    if (v) v = std::move(draws[k++]);

  DriftOutcome out;
  out.table = t;
  out.table.replace_values(column, std::move(values));
  out.log.seed = seed;
  out.log.modified_columns = {column};
  ShiftParams sp;
  sp.boost = boost;
  sp.top_m = top_m;
  out.log.op_applied = DriftSpec{DriftOp::kShiftDistribution, {column}, sp, {}};
  return out;
}

// ---------------------------------------------------------------------------
// Outliers

namespace detail {

inline std::pair<double, double> p1_p99(const ColumnProfile& p) {
  double p1 = *p.min, p99 = *p.max;
  for (auto [lvl, v] : p.percentiles) {
    if (lvl == 0.01) p1 = v;
    if (lvl == 0.99) p99 = v;
  }
  return {p1, p99};
}

}  // namespace detail

/// Draws `rule.count` values uniformly from [min - k*std, p1) U (p99, max + k*std].
inline std::vector<double> outlier_values_by_rule(const ColumnProfile& p, const OutlierRule& rule, Rng& rng) {
  if (!is_ordered(p.logical_type)) throw Error("outliers need a numeric or datetime column");
  auto [p1, p99] = detail::p1_p99(p);
  double lo = *p.min - rule.k * *p.std;
  double hi = *p.max + rule.k * *p.std;
  double low_len = std::max(0.0, p1 - lo);
  double high_len = std::max(0.0, hi - p99);
  if (low_len + high_len <= 0.0) throw Error("column '" + p.name + "' has no room for outliers");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out;
  out.reserve(rule.count);
  for (std::size_t i = 0; i < rule.count; ++i) {
    double side = u(rng) * (low_len + high_len);
    double x;
    if (side < low_len) {
      x = lo + u(rng) * low_len;  // [lo, p1)
      if (p.integral) x = std::floor(x);
      if (x >= p1) x = std::nextafter(p1, -INFINITY);
    } else {
      x = hi - u(rng) * high_len;  // (p99, hi]
      if (p.integral) x = std::ceil(x);
      if (x <= p99) x = std::nextafter(p99, INFINITY);
    }
    out.push_back(x);
  }
  return out;
}

/// Appends one row per outlier: the outlier in `column`, other fields synthesized.
inline DriftOutcome inject_outliers(const Table& t, const TableSchema& schema, const std::string& column,
                                    const OutlierParams& params, std::uint64_t seed) {
  const auto& prof = schema.at(column);
  if (!is_ordered(prof.logical_type)) throw Error("outliers need a numeric or datetime column, '" + column + "' is " + to_string(prof.logical_type));
  DriftOutcome out;
  std::vector<std::string> rendered;
  auto [p1, p99] = detail::p1_p99(prof);

  if (params.rule) {
    auto rng = make_rng(seed, "outlier_rule", column);
    for (double x : outlier_values_by_rule(prof, *params.rule, rng)) rendered.push_back(prof.render(x));
  } else {
    for (const auto& v : params.values) {
      auto x = prof.numeric_value(v);
      if (!x) throw Error("outlier value '" + v + "' does not conform to column '" + column + "'");
      if (*x >= p1 && *x <= p99) out.warnings.push_back("outlier value " + v + " lies inside [p1, p99] of '" + column + "'");
      rendered.push_back(v);
    }
  }
  if (rendered.empty()) throw Error("no outlier values to inject");

  auto extra = generate_rows(schema, rendered.size(), substream(seed, "outlier_rows"));
  extra.set_name(t.name());
  std::vector<Cell> cells(rendered.begin(), rendered.end());
  extra.replace_values(column, std::move(cells));

  auto n = t.row_count();
  out.table = t;
  out.table.append_rows(extra);
  out.log.seed = seed;
  out.log.inserted_row_indices = detail::iota_range(n, n + rendered.size());
  out.log.op_applied = DriftSpec{DriftOp::kInjectOutliers, {column}, params, {}};
  return out;
}

// ---------------------------------------------------------------------------
// Chaining

/// Dispatches one spec. Shift specs apply to each target column in turn.
inline DriftOutcome apply_one(const Table& t, const TableSchema& schema, const DriftSpec& spec, std::uint64_t seed) {
  DriftOutcome out;
  switch (spec.op) {
    case DriftOp::kScaleCardinality: {
      const auto* p = std::get_if<ScaleParams>(&spec.params);
      if (!p) throw Error("scale_cardinality needs scale parameters");
      out = scale_cardinality(t, schema, p->factor, p->regenerate, seed);
      break;
    }
    case DriftOp::kUpdateCardinality: {
      const auto* p = std::get_if<UpdateParams>(&spec.params);
      if (!p) throw Error("update_cardinality needs update parameters");
      out = update_cardinality(t, schema, *p, seed);
      break;
    }
    case DriftOp::kShiftDistribution: {
      const auto* p = std::get_if<ShiftParams>(&spec.params);
      if (!p) throw Error("shift_distribution needs shift parameters");
      if (spec.target_columns.empty()) throw Error("shift_distribution needs at least one target column");
      out.table = t;
      out.log.seed = seed;
      for (const auto& c : spec.target_columns) {
        const auto& prof = schema.at(c);
        DriftOutcome step;
        if (prof.logical_type == LogicalType::kNumeric) {
          if (!p->target_skewness) throw Error("numeric column '" + c + "' needs target_skewness");
          step = skew_numeric(out.table, c, *p->target_skewness, substream(seed, c));
        } else {
          step = skew_categorical(out.table, c, p->boost, p->top_m, substream(seed, c));
        }
        out.table = std::move(step.table);
        out.log.modified_columns.push_back(c);
      }
      break;
    }
    case DriftOp::kInjectOutliers: {
      const auto* p = std::get_if<OutlierParams>(&spec.params);
      if (!p) throw Error("inject_outliers needs outlier parameters");
      if (spec.target_columns.size() != 1) throw Error("inject_outliers needs exactly one target column");
      out = inject_outliers(t, schema, spec.target_columns.front(), *p, seed);
      break;
    }
  }
  out.log.op_applied = spec;
  out.log.seed = seed;
  return out;
}

struct DriftChainResult {
  Table table;
  std::vector<ChangeLog> logs;
  std::vector<std::string> warnings;
};

/// Applies specs in order, re-profiling between steps so each step sees the
/// statistics of its actual input. Step i uses seed substream(seed, "step", i).
inline DriftChainResult apply_drift(const Table& t, const TableSchema& schema, const std::vector<DriftSpec>& specs,
                                    std::uint64_t seed) {
  if (specs.empty()) throw Error("drift spec list is empty");
  DriftChainResult res;
  res.table = t;
  TableSchema current = schema;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      auto out = apply_one(res.table, current, specs[i], substream(seed, "step", i));
      res.table = std::move(out.table);
      res.logs.push_back(std::move(out.log));
      for (auto& w : out.warnings) res.warnings.push_back("step " + std::to_string(i) + ": " + w);
      if (i + 1 < specs.size()) current = extract_schema(res.table, current, schema.bucket_count);
    } catch (const Error& e) {
      throw Error("drift step " + std::to_string(i) + " (" + to_string(specs[i].op) + "): " + e.what());
    }
  }
  return res;
}

}  // namespace driftgen
