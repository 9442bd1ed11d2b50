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
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/driftops.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/table.hpp"
#include "driftgen/templates.hpp"
#include "driftgen/workloads.hpp"

namespace driftgen {

// ---------------------------------------------------------------------------
// Divergences

/// Two-sample Kolmogorov-Smirnov statistic: sup_x |F_a(x) - F_b(x)|.
inline double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("ks_statistic needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  // exact integer numerator |i*ny - j*nx| so the result is rounded once
  const std::size_t nx = x.size(), ny = y.size();
  std::size_t i = 0, j = 0, best = 0;
  while (i < nx && j < ny) {
    double v = std::min(x[i], y[j]);
    while (i < nx && x[i] == v) ++i;
    while (j < ny && y[j] == v) ++j;
    std::size_t a = i * ny, b = j * nx;
    best = std::max(best, a > b ? a - b : b - a);
  }
  double d = static_cast<double>(best) / (static_cast<double>(nx) * static_cast<double>(ny));
  return d;
}

using Frequencies = std::map<std::string, double>;

/// Half the L1 distance between two normalized frequency maps.
inline double tv_distance(const Frequencies& a, const Frequencies& b) {
  auto total = [](const Frequencies& f) {
    double s = 0.0;
    for (auto& [k, v] : f) {
      if (v < 0.0) throw Error("tv_distance: negative frequency for '" + k + "'");
      s += v;
    }
    return s;
  };
  if (std::abs(total(a) - 1.0) > 1e-9 || std::abs(total(b) - 1.0) > 1e-9)
    throw Error("tv_distance: frequencies must sum to 1");
  double sum = 0.0;
  for (auto& [k, v] : a) {
    auto it = b.find(k);
    sum += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (auto& [k, v] : b)
    if (!a.count(k)) sum += v;
  return std::min(1.0, 0.5 * sum);
}

/// Normalized frequencies of the non-null cells of a column.
inline Frequencies frequencies_of(std::span<const Cell> values) {
  Frequencies f;
  double n = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    f[*v] += 1.0;
    n += 1.0;
  }
  for (auto& [k, v] : f) v /= n;
  return f;
}

inline Frequencies frequencies_of(std::span<const std::string> values) {
  Frequencies f;
  for (const auto& v : values) f[v] += 1.0;
  for (auto& [k, v] : f) v /= static_cast<double>(values.size());
  return f;
}

inline std::vector<double> numeric_values(const Column& column, const ColumnProfile& profile) {
  std::vector<double> out;
  out.reserve(column.values.size());
  for (const auto& v : column.values)
    if (auto x = profile.numeric_value(v)) out.push_back(*x);
  return out;
}

// ---------------------------------------------------------------------------
// Reports

enum class DriftKind { kCardinality, kDistributionalGlobal, kDistributionalLocal, kParametric, kStructural, kNone };

inline std::string to_string(DriftKind k) {
  switch (k) {
    case DriftKind::kCardinality: return "cardinality";
    case DriftKind::kDistributionalGlobal: return "distributional-global";
    case DriftKind::kDistributionalLocal: return "distributional-local";
    case DriftKind::kParametric: return "parametric";
    case DriftKind::kStructural: return "structural";
    case DriftKind::kNone: return "none";
  }
  return "none";
}

/// verdict holds exactly when magnitude > threshold_used.
struct DriftReport {
  DriftKind kind = DriftKind::kNone;
  double magnitude = 0.0;
  double threshold_used = 0.0;
  std::map<std::string, double> per_column_divergence;
  std::map<std::string, double> details;
  bool verdict = false;
};

/// ||D2| - |D1|| > alpha * |D1| (strict).
inline DriftReport check_cardinality_drift(std::size_t n1, std::size_t n2, double alpha) {
  if (n1 == 0) throw Error("check_cardinality_drift: reference cardinality is 0");
  if (!(alpha > 0.0)) throw Error("alpha must be > 0");
  DriftReport r;
  r.kind = DriftKind::kCardinality;
  double diff = std::abs(static_cast<double>(n2) - static_cast<double>(n1));
  r.magnitude = diff / static_cast<double>(n1);
  r.threshold_used = alpha;
  r.verdict = diff > alpha * static_cast<double>(n1);
  r.details["n1"] = static_cast<double>(n1);
  r.details["n2"] = static_cast<double>(n2);
  return r;
}

namespace detail {

inline void require_same_columns(const Table& d1, const Table& d2) {
  if (d1.column_names() != d2.column_names())
    throw Error("schema mismatch between '" + d1.name() + "' and '" + d2.name() + "'");
}

inline double skewness_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  return sample_skewness(xs);
}

}  // namespace detail

/// Per-column divergence: KS for numeric/datetime, TV for categorical/text.
/// Verdict when the largest per-column divergence exceeds epsilon.
inline DriftReport check_distributional_drift(const Table& d1, const Table& d2, const TableSchema& schema,
                                              double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error("epsilon must be in (0, 1]");
  detail::require_same_columns(d1, d2);
  DriftReport r;
  r.kind = DriftKind::kDistributionalGlobal;
  r.threshold_used = epsilon;
  for (const auto& prof : schema.columns) {
    const auto& c1 = d1.column(prof.name);
    const auto& c2 = d2.column(prof.name);
    double delta = 0.0;
    if (is_ordered(prof.logical_type)) {
      auto x1 = numeric_values(c1, prof), x2 = numeric_values(c2, prof);
      if (x1.empty() || x2.empty())
        delta = x1.empty() == x2.empty() ? 0.0 : 1.0;
      else
        delta = ks_statistic(x1, x2);
      r.details["skewness_delta." + prof.name] = detail::skewness_of(x2) - detail::skewness_of(x1);
    } else {
      auto f1 = frequencies_of(c1.values), f2 = frequencies_of(c2.values);
      if (f1.empty() || f2.empty())
        delta = f1.empty() == f2.empty() ? 0.0 : 1.0;
      else
        delta = tv_distance(f1, f2);
    }
    r.per_column_divergence[prof.name] = delta;
    r.magnitude = std::max(r.magnitude, delta);
  }
  r.verdict = r.magnitude > r.threshold_used;
  return r;
}

/// Point-injection report. Magnitude is the largest per-column fraction of d2
/// values outside d1's observed [min, max]; any such value counts (threshold 0).
/// details carry outlier counts and the mass outside d1's [p1, p99].
inline DriftReport check_local_drift(const Table& d1, const Table& d2, const TableSchema& schema) {
  detail::require_same_columns(d1, d2);
  DriftReport r;
  r.kind = DriftKind::kDistributionalLocal;
  r.threshold_used = 0.0;
  for (const auto& prof : schema.columns) {
    if (!is_ordered(prof.logical_type)) continue;
    auto x1 = numeric_values(d1.column(prof.name), prof);
    auto x2 = numeric_values(d2.column(prof.name), prof);
    if (x1.empty() || x2.empty()) continue;
    auto [mn, mx] = std::minmax_element(x1.begin(), x1.end());
    std::sort(x1.begin(), x1.end());
    double p1 = detail::nearest_rank(x1, 0.01), p99 = detail::nearest_rank(x1, 0.99);
    double outside = 0.0, tails = 0.0;
    for (double x : x2) {
      if (x < *mn || x > *mx) outside += 1.0;
      if (x < p1 || x > p99) tails += 1.0;
    }
    double frac = outside / static_cast<double>(x2.size());
    r.per_column_divergence[prof.name] = frac;
    r.details["outlier_count." + prof.name] = outside;
    r.details["tail_mass." + prof.name] = tails / static_cast<double>(x2.size());
    r.magnitude = std::max(r.magnitude, frac);
  }
  r.verdict = r.magnitude > r.threshold_used;
  return r;
}

// ---------------------------------------------------------------------------
// Full-scan oracle

inline constexpr std::size_t kDefaultJoinRowCap = 1'000'000;

/// Predicate columns of a template's (joined) relation, materialized for scanning.
class Relation {
 public:
  std::size_t row_count() const { return rows_; }

  /// Fraction of rows satisfying every bound predicate of `q`.
  double selectivity(const QueryTemplate& t, const QueryInstance& q) const {
    if (q.bindings.size() != t.predicates.size()) throw Error("instance does not match template " + t.id);
    if (rows_ == 0) return 0.0;
    std::vector<const RelColumn*> cols;
    for (const auto& s : t.predicates) {
      auto it = columns_.find(s.column.qualified());
      if (it == columns_.end()) throw Error("unknown column " + s.column.qualified());
      cols.push_back(&it->second);
    }
    auto matches = [&](std::size_t r) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (const auto* range = std::get_if<RangeBinding>(&q.bindings[i])) {
          double x = cols[i]->numeric[r];
          if (std::isnan(x) || x < range->low || x > range->high) return false;
        } else {
          const auto& cell = cols[i]->text[r];
          if (!cell || *cell != std::get<EqualityBinding>(q.bindings[i]).value) return false;
        }
      }
      return true;
    };
    if (cols.empty()) return 1.0;

    // scan only the rows admitted by the most selective predicate's index
    std::span<const std::size_t> best;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::span<const std::size_t> cand;
      if (const auto* range = std::get_if<RangeBinding>(&q.bindings[i])) {
        const auto& sorted = cols[i]->sorted;
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), range->low) - sorted.begin();
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), range->high) - sorted.begin();
        if (hi < lo) hi = lo;
        cand = std::span<const std::size_t>(cols[i]->order).subspan(static_cast<std::size_t>(lo),
                                                                    static_cast<std::size_t>(hi - lo));
      } else {
        auto it = cols[i]->postings.find(std::get<EqualityBinding>(q.bindings[i]).value);
        if (it != cols[i]->postings.end()) cand = it->second;
      }
      if (i == 0 || cand.size() < best.size()) best = cand;
    }
    std::size_t hits = 0;
    for (auto r : best)
      if (matches(r)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(rows_);
  }

  /// Materializes the template's tables (hash-joined along its join edges).
  static Relation build(std::span<const Table> tables, std::span<const TableSchema> schemas, const QueryTemplate& t,
                        std::size_t row_cap = kDefaultJoinRowCap) {
    auto table_named = [&](const std::string& name) -> const Table& {
      for (const auto& tb : tables)
        if (tb.name() == name) return tb;
      throw Error("no table named '" + name + "'");
    };
    auto profile_of = [&](const ColumnRef& c) -> const ColumnProfile& {
      return detail::schema_named(schemas, c.table).at(c.column);
    };
    auto key_of = [&](const ColumnRef& c, std::size_t row) -> std::optional<std::string> {
      const auto& cell = table_named(c.table).column(c.column).values[row];
      const auto& prof = profile_of(c);
      if (!cell) return std::nullopt;
      if (is_ordered(prof.logical_type)) {
        auto x = prof.numeric_value(cell);
        if (!x) return std::nullopt;
        return format_number(*x);
      }
      return *cell;
    };

    // tuples[k][i] is the row of t.tables[i] contributing to joined row k
    std::vector<std::string> order{t.tables.front()};
    std::vector<std::vector<std::size_t>> tuples;
    const auto& first = table_named(t.tables.front());
    if (first.row_count() > row_cap) throw Error("relation exceeds the join row cap");
    for (std::size_t r = 0; r < first.row_count(); ++r) tuples.push_back({r});

    for (const auto& j : t.joins) {
      bool has_left = std::find(order.begin(), order.end(), j.left.table) != order.end();
      const auto& existing = has_left ? j.left : j.right;
      const auto& incoming = has_left ? j.right : j.left;
      auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), existing.table) - order.begin());
      if (pos == order.size()) throw Error("join edge does not touch the relation built so far");

      std::unordered_map<std::string, std::vector<std::size_t>> hash;
      const auto& in_table = table_named(incoming.table);
      for (std::size_t r = 0; r < in_table.row_count(); ++r)
        if (auto k = key_of(incoming, r)) hash[*k].push_back(r);

      std::vector<std::vector<std::size_t>> next;
      for (const auto& tup : tuples) {
        auto k = key_of(existing, tup[pos]);
        if (!k) continue;
        auto it = hash.find(*k);
        if (it == hash.end()) continue;
        for (auto r : it->second) {
          if (next.size() >= row_cap) throw Error("joined relation exceeds the row cap of " + std::to_string(row_cap));
          auto ext = tup;
          ext.push_back(r);
          next.push_back(std::move(ext));
        }
      }
      tuples = std::move(next);
      order.push_back(incoming.table);
    }

    Relation rel;
    rel.rows_ = tuples.size();
    for (const auto& s : t.predicates) {
      auto key = s.column.qualified();
      if (rel.columns_.count(key)) continue;
      auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), s.column.table) - order.begin());
      if (pos == order.size()) throw Error("predicate column " + key + " is not in the relation");
      const auto& src = table_named(s.column.table).column(s.column.column).values;
      const auto& prof = profile_of(s.column);
      RelColumn col;
      if (is_ordered(prof.logical_type)) {
        col.numeric.reserve(tuples.size());
        for (const auto& tup : tuples)
          col.numeric.push_back(prof.numeric_value(src[tup[pos]]).value_or(std::numeric_limits<double>::quiet_NaN()));
        for (std::size_t r = 0; r < tuples.size(); ++r)
          if (!std::isnan(col.numeric[r])) col.order.push_back(r);
        std::stable_sort(col.order.begin(), col.order.end(),
                         [&](std::size_t a, std::size_t b) { return col.numeric[a] < col.numeric[b]; });
        col.sorted.reserve(col.order.size());
        for (auto r : col.order) col.sorted.push_back(col.numeric[r]);
      } else {
        col.text.reserve(tuples.size());
        for (const auto& tup : tuples) col.text.push_back(src[tup[pos]]);
        for (std::size_t r = 0; r < tuples.size(); ++r)
          if (col.text[r]) col.postings[*col.text[r]].push_back(r);
      }
      rel.columns_.emplace(std::move(key), std::move(col));
    }
    return rel;
  }

 private:
  struct RelColumn {
    std::vector<double> numeric;  // NaN for null
    std::vector<Cell> text;
    // Indexes: non-null rows by ascending value, and rows per text value.
    std::vector<std::size_t> order;
    std::vector<double> sorted;
    std::unordered_map<std::string, std::vector<std::size_t>> postings;
  };
  std::size_t rows_ = 0;
  std::map<std::string, RelColumn> columns_;
};

/// Exact selectivity by full scan, caching one materialized relation per template.
class ScanOracle {
 public:
  ScanOracle(std::vector<Table> tables, std::vector<TableSchema> schemas, std::size_t row_cap = kDefaultJoinRowCap)
      : tables_(std::move(tables)), schemas_(std::move(schemas)), row_cap_(row_cap) {}

  double selectivity(const QueryTemplate& t, const QueryInstance& q) { return relation(t).selectivity(t, q); }

  double cardinality(const QueryTemplate& t, const QueryInstance& q) {
    const auto& rel = relation(t);
    return rel.selectivity(t, q) * static_cast<double>(rel.row_count());
  }

  const Relation& relation(const QueryTemplate& t) {
    auto it = cache_.find(t.id);
    if (it == cache_.end()) it = cache_.emplace(t.id, Relation::build(tables_, schemas_, t, row_cap_)).first;
    return it->second;
  }

  const std::vector<TableSchema>& schemas() const { return schemas_; }

 private:
  std::vector<Table> tables_;
  std::vector<TableSchema> schemas_;
  std::size_t row_cap_;
  std::map<std::string, Relation> cache_;
};

inline double true_selectivity(std::span<const Table> tables, std::span<const TableSchema> schemas,
                               const QueryTemplate& t, const QueryInstance& q) {
  return Relation::build(tables, schemas, t).selectivity(t, q);
}

// ---------------------------------------------------------------------------
// Histogram estimator

/// Fraction of a column's non-null values in [low, high], assuming the values
/// of each equi-depth bucket are evenly spread over it. Group sizes follow the
/// profiler's split: bucket b holds floor((b+1)n/B) - floor(bn/B) values; the
/// first bucket spans [bound0, bound1], later ones (bound_b, bound_b+1].
inline double histogram_range_fraction(const ColumnProfile& p, double low, double high) {
  const auto& bounds = p.histogram_bounds;
  if (bounds.size() < 2 || p.non_null_count == 0) throw Error("column '" + p.name + "' has no histogram");
  if (low > high) return 0.0;
  const std::size_t n = p.non_null_count;
  const std::size_t buckets = bounds.size() - 1;
  double count = 0.0;
  for (std::size_t b = 0; b < buckets; ++b) {
    std::size_t g = (b + 1) * n / buckets - b * n / buckets;
    if (g == 0) continue;
    double lo = bounds[b], hi = bounds[b + 1];
    if (hi == lo || (b == 0 && g == 1)) {
      double at = hi;
      if (at >= low && at <= high) count += static_cast<double>(g);
      continue;
    }
    // positions base + k * step for k in [k0, k1]
    double base = lo, step;
    long long k0, k1;
    if (b == 0) {
      step = (hi - lo) / static_cast<double>(g - 1);
      k0 = 0;
      k1 = static_cast<long long>(g) - 1;
    } else {
      step = (hi - lo) / static_cast<double>(g);
      k0 = 1;
      k1 = static_cast<long long>(g);
    }
    double tol = 1e-9;
    auto first = std::max<long long>(k0, static_cast<long long>(std::ceil((low - base) / step - tol)));
    auto last = std::min<long long>(k1, static_cast<long long>(std::floor((high - base) / step + tol)));
    if (last >= first) count += static_cast<double>(last - first + 1);
  }
  return count / static_cast<double>(n);
}

/// Most-common-value frequency if listed, else the residual mass spread
/// uniformly over the remaining distinct values. Fraction of non-null values.
inline double histogram_equality_fraction(const ColumnProfile& p, const std::string& value) {
  double listed = 0.0;
  for (const auto& [v, f] : p.top_k) {
    if (v == value) return f;
    listed += f;
  }
  if (p.distinct_count <= p.top_k.size()) return 0.0;
  return std::max(0.0, 1.0 - listed) / static_cast<double>(p.distinct_count - p.top_k.size());
}

/// Estimated result rows from schema statistics alone: per-predicate
/// selectivities multiplied under independence; joins use 1/max(distinct).
inline double histogram_estimate(std::span<const TableSchema> schemas, const QueryTemplate& t, const QueryInstance& q) {
  if (q.bindings.size() != t.predicates.size()) throw Error("instance does not match template " + t.id);
  double rows = 1.0;
  for (const auto& tb : t.tables) rows *= static_cast<double>(detail::schema_named(schemas, tb).row_count);
  for (const auto& j : t.joins) {
    const auto& l = detail::schema_named(schemas, j.left.table).at(j.left.column);
    const auto& r = detail::schema_named(schemas, j.right.table).at(j.right.column);
    double d = static_cast<double>(std::max<std::size_t>({l.distinct_count, r.distinct_count, 1}));
    rows *= (1.0 - l.null_fraction) * (1.0 - r.null_fraction) / d;
  }
  for (std::size_t i = 0; i < t.predicates.size(); ++i) {
    const auto& slot = t.predicates[i];
    const auto& prof = detail::schema_named(schemas, slot.column.table).at(slot.column.column);
    double frac;
    if (const auto* range = std::get_if<RangeBinding>(&q.bindings[i])) {
      if (!is_ordered(prof.logical_type)) throw Error("range predicate on non-ordered column " + slot.column.qualified());
      frac = histogram_range_fraction(prof, range->low, range->high);
    } else {
      frac = histogram_equality_fraction(prof, std::get<EqualityBinding>(q.bindings[i]).value);
    }
    rows *= frac * (1.0 - prof.null_fraction);
  }
  return rows;
}

inline double histogram_estimate(const TableSchema& schema, const QueryTemplate& t, const QueryInstance& q) {
  return histogram_estimate(std::span<const TableSchema>(&schema, 1), t, q);
}

/// max(e, g) / min(e, g) with both arguments clamped to at least 1.
inline double q_error(double estimate, double truth) {
  if (estimate < 0.0 || truth < 0.0 || std::isnan(estimate) || std::isnan(truth))
    throw Error("q_error needs non-negative inputs");
  double e = std::max(estimate, 1.0), g = std::max(truth, 1.0);
  return std::max(e, g) / std::min(e, g);
}

// ---------------------------------------------------------------------------
// Workload drift

struct SelectivityReport {
  std::vector<double> per_query;
  double mean = 0.0;
  std::map<std::int64_t, double> group_means;
};

using TemplateIndex = std::map<std::string, QueryTemplate>;

inline TemplateIndex index_templates(std::span<const QueryTemplate> templates) {
  TemplateIndex idx;
  for (const auto& t : templates) idx.emplace(t.id, t);
  return idx;
}

inline const QueryTemplate& template_for(const TemplateIndex& templates, const QueryInstance& q) {
  auto it = templates.find(q.template_id);
  if (it == templates.end()) throw Error("unknown template id " + q.template_id);
  return it->second;
}

inline SelectivityReport selectivity_report(const Workload& w, const TemplateIndex& templates, ScanOracle& oracle) {
  SelectivityReport r;
  std::map<std::int64_t, std::pair<double, std::size_t>> groups;
  for (const auto& q : w) {
    double s = oracle.selectivity(template_for(templates, q), q);
    r.per_query.push_back(s);
    auto& g = groups[q.group_id];
    g.first += s;
    ++g.second;
  }
  if (!r.per_query.empty())
    r.mean = std::accumulate(r.per_query.begin(), r.per_query.end(), 0.0) / static_cast<double>(r.per_query.size());
  for (auto& [gid, acc] : groups) r.group_means[gid] = acc.first / static_cast<double>(acc.second);
  return r;
}

/// Structural drift when the workloads use different template sets; otherwise
/// parametric drift when, for some template slot, the divergence of bound
/// parameters (KS over range centers, TV over equality values) exceeds epsilon,
/// or when |Sel1 - Sel2| > alpha * Sel1 over mean true selectivities.
///
/// The reported magnitude/threshold pair is the one that decided the verdict:
/// parameter divergence vs epsilon, or relative selectivity change vs alpha
/// when only the selectivity branch fires. Structural magnitude is the Jaccard
/// distance between template-id sets (threshold 0).
inline DriftReport verify_workload_drift(const Workload& w1, const Workload& w2, const TemplateIndex& templates,
                                         ScanOracle& oracle, const DriftThresholds& thresholds) {
  if (w1.empty() || w2.empty()) throw Error("verify_workload_drift needs two non-empty workloads");
  thresholds.validate();
  DriftReport r;

  std::set<std::string> ids1, ids2;
  for (const auto& q : w1) ids1.insert(q.template_id);
  for (const auto& q : w2) ids2.insert(q.template_id);
  if (ids1 != ids2) {
    std::vector<std::string> common, all;
    std::set_intersection(ids1.begin(), ids1.end(), ids2.begin(), ids2.end(), std::back_inserter(common));
    std::set_union(ids1.begin(), ids1.end(), ids2.begin(), ids2.end(), std::back_inserter(all));
    r.kind = DriftKind::kStructural;
    r.magnitude = 1.0 - static_cast<double>(common.size()) / static_cast<double>(all.size());
    r.threshold_used = 0.0;
    r.verdict = true;
    r.details["templates_1"] = static_cast<double>(ids1.size());
    r.details["templates_2"] = static_cast<double>(ids2.size());
    r.details["templates_shared"] = static_cast<double>(common.size());
    return r;
  }

  double param_div = 0.0;
  for (const auto& id : ids1) {
    const auto& t = templates.at(id);
    for (std::size_t s = 0; s < t.predicates.size(); ++s) {
      double d;
      if (t.predicates[s].kind == PredicateKind::kRange) {
        std::vector<double> c1, c2;
        for (const auto& q : w1)
          if (q.template_id == id && q.centers.at(s)) c1.push_back(*q.centers[s]);
        for (const auto& q : w2)
          if (q.template_id == id && q.centers.at(s)) c2.push_back(*q.centers[s]);
        d = ks_statistic(c1, c2);
      } else {
        std::vector<std::string> v1, v2;
        for (const auto& q : w1)
          if (q.template_id == id) v1.push_back(std::get<EqualityBinding>(q.bindings.at(s)).value);
        for (const auto& q : w2)
          if (q.template_id == id) v2.push_back(std::get<EqualityBinding>(q.bindings.at(s)).value);
        d = tv_distance(frequencies_of(v1), frequencies_of(v2));
      }
      r.per_column_divergence[id + "/" + std::to_string(s) + ":" + t.predicates[s].column.qualified()] = d;
      param_div = std::max(param_div, d);
    }
  }

  double sel1 = selectivity_report(w1, templates, oracle).mean;
  double sel2 = selectivity_report(w2, templates, oracle).mean;
  double change = std::abs(sel1 - sel2);
  double rel_change = sel1 > 0.0 ? change / sel1 : (change > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  bool param_fires = param_div > thresholds.epsilon;
  bool sel_fires = change > thresholds.alpha * sel1;

  r.details["selectivity_1"] = sel1;
  r.details["selectivity_2"] = sel2;
  r.details["selectivity_change"] = change;
  r.details["parameter_divergence"] = param_div;
  r.details["parameter_branch"] = param_fires ? 1.0 : 0.0;
  r.details["selectivity_branch"] = sel_fires ? 1.0 : 0.0;

  if (!param_fires && sel_fires) {
    r.magnitude = rel_change;
    r.threshold_used = thresholds.alpha;
  } else {
    r.magnitude = param_div;
    r.threshold_used = thresholds.epsilon;
  }
  r.verdict = param_fires || sel_fires;
  r.kind = r.verdict ? DriftKind::kParametric : DriftKind::kNone;
  return r;
}

}  // namespace driftgen
