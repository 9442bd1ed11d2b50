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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/table.hpp"

namespace driftgen {

enum class LogicalType { kNumeric, kCategorical, kDatetime, kText };

inline std::string to_string(LogicalType t) {
  switch (t) {
    case LogicalType::kNumeric: return "numeric";
    case LogicalType::kCategorical: return "categorical";
    case LogicalType::kDatetime: return "datetime";
    case LogicalType::kText: return "text";
  }
  return "text";
}

inline LogicalType logical_type_from_string(std::string_view s) {
  if (s == "numeric") return LogicalType::kNumeric;
  if (s == "categorical") return LogicalType::kCategorical;
  if (s == "datetime") return LogicalType::kDatetime;
  if (s == "text") return LogicalType::kText;
  throw Error("unknown logical type '" + std::string(s) + "'");
}

/// Numeric and datetime columns share the numeric machinery (datetimes as epoch seconds).
inline bool is_ordered(LogicalType t) { return t == LogicalType::kNumeric || t == LogicalType::kDatetime; }

inline constexpr double kPercentileLevels[] = {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99};
inline constexpr std::size_t kDefaultBucketCount = 100;
inline constexpr std::size_t kDefaultTopK = 10;
inline constexpr std::size_t kSupportCap = 10000;
inline constexpr std::size_t kSampleValues = 10;

struct ColumnProfile {
  std::string name;
  LogicalType logical_type = LogicalType::kText;
  std::size_t non_null_count = 0;
  double null_fraction = 0.0;

  // Ordered columns only.
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> mean;
  std::optional<double> std;
  std::optional<double> skewness;
  std::vector<std::pair<double, double>> percentiles;
  std::vector<double> histogram_bounds;
  bool integral = false;
  DatetimeFormat datetime_format = DatetimeFormat::kDate;
  /// Compact sampling support: exact (value, count) pairs when the column has
  /// at most kSupportCap distinct values, otherwise kSupportCap evenly spaced
  /// order statistics with count 1.
  std::vector<std::pair<double, double>> support;

  std::size_t distinct_count = 0;
  /// Most common values with their frequency among non-null cells.
  std::vector<std::pair<std::string, double>> top_k;
  std::vector<std::string> sample_values;
  /// Categorical/text only: (value, count), most frequent first.
  std::vector<std::pair<std::string, double>> value_frequencies;

  /// Renders a numeric model value in this column's textual form.
  std::string render(double v) const {
    if (logical_type == LogicalType::kDatetime) return format_datetime(v, datetime_format);
    if (integral) return format_number(std::round(v));
    return format_number(v);
  }

  /// Numeric view of a cell, or nullopt for nulls and non-conforming text.
  std::optional<double> numeric_value(const Cell& cell) const {
    if (!cell) return std::nullopt;
    if (logical_type == LogicalType::kNumeric) return parse_number(*cell);
    if (logical_type == LogicalType::kDatetime) {
      auto p = parse_datetime(*cell);
      if (!p) return std::nullopt;
      return p->epoch_seconds;
    }
    return std::nullopt;
  }
};

struct TableSchema {
  std::string table_name;
  std::size_t row_count = 0;
  std::size_t bucket_count = kDefaultBucketCount;
  std::vector<ColumnProfile> columns;

  const ColumnProfile* find(std::string_view column) const {
    for (const auto& c : columns)
      if (c.name == column) return &c;
    return nullptr;
  }
  const ColumnProfile& at(std::string_view column) const {
    if (auto* c = find(column)) return *c;
    throw Error("schema '" + table_name + "' has no column '" + std::string(column) + "'");
  }
};

/// Type inference over raw cells.
///   numeric:     >= 99% of non-null values parse as numbers
///   datetime:    >= 99% parse as an accepted datetime
///   categorical: distinct count <= max(100, 5% of rows)
///   text:        otherwise
inline LogicalType infer_logical_type(std::span<const Cell> values) {
  std::size_t non_null = 0, numeric = 0, datetime = 0;
  std::unordered_map<std::string_view, std::size_t> distinct;
  for (const auto& v : values) {
    if (!v) continue;
    ++non_null;
    if (parse_number(*v)) ++numeric;
    if (parse_datetime(*v)) ++datetime;
    distinct.emplace(*v, 0);
  }
  if (non_null == 0) throw Error("untypeable column: all values are null");
  if (numeric * 100 >= non_null * 99) return LogicalType::kNumeric;
  if (datetime * 100 >= non_null * 99) return LogicalType::kDatetime;
  std::size_t limit = std::max<std::size_t>(100, values.size() / 20);
  if (distinct.size() <= limit) return LogicalType::kCategorical;
  return LogicalType::kText;
}

namespace detail {

/// Nearest-rank percentile over sorted data.
inline double nearest_rank(const std::vector<double>& sorted, double p) {
  auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

/// Upper bound of every equi-depth group: group b holds sorted indices
/// [floor(b*n/B), floor((b+1)*n/B)).
inline std::vector<double> equi_depth_bounds(const std::vector<double>& sorted, std::size_t buckets) {
  std::vector<double> bounds;
  bounds.reserve(buckets + 1);
  auto n = sorted.size();
  bounds.push_back(sorted.front());
  for (std::size_t b = 1; b <= buckets; ++b) {
    std::size_t end = b * n / buckets;
    bounds.push_back(end == 0 ? sorted.front() : sorted[end - 1]);
  }
  return bounds;
}

template <typename Key>
std::vector<std::pair<Key, double>> frequency_table(const std::vector<Key>& sorted) {
  std::vector<std::pair<Key, double>> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.emplace_back(sorted[i], static_cast<double>(j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Computes column statistics for an already-typed column.
inline ColumnProfile profile_column(std::string name, std::span<const Cell> values, LogicalType type,
                                    std::size_t bucket_count = kDefaultBucketCount,
                                    std::size_t top_k = kDefaultTopK) {
  if (bucket_count < 1) throw Error("bucket_count must be >= 1");
  ColumnProfile p;
  p.name = std::move(name);
  p.logical_type = type;

  for (const auto& v : values) {
    if (!v || p.sample_values.size() >= kSampleValues) continue;
    if (std::find(p.sample_values.begin(), p.sample_values.end(), *v) == p.sample_values.end())
      p.sample_values.push_back(*v);
  }

  if (is_ordered(type)) {
    std::vector<double> xs;
    xs.reserve(values.size());
    std::map<DatetimeFormat, std::size_t> formats;
    bool integral = true;
    for (const auto& v : values) {
      if (!v) continue;
      if (type == LogicalType::kNumeric) {
        if (auto x = parse_number(*v)) {
          xs.push_back(*x);
          integral = integral && *x == std::floor(*x) && std::abs(*x) < 1e15;
        }
      } else if (auto d = parse_datetime(*v)) {
        xs.push_back(d->epoch_seconds);
        ++formats[d->format];
      }
    }
    if (xs.size() < 2) throw Error("column '" + p.name + "' has fewer than 2 non-null values; std undefined");

    p.integral = type == LogicalType::kNumeric && integral;
    if (type == LogicalType::kDatetime) {
      p.datetime_format =
          std::max_element(formats.begin(), formats.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
    }

    std::sort(xs.begin(), xs.end());
    auto n = static_cast<double>(xs.size());
    p.non_null_count = xs.size();
    p.null_fraction = values.empty() ? 0.0 : 1.0 - n / static_cast<double>(values.size());
    p.min = xs.front();
    p.max = xs.back();

    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
      double d = x - mean;
      m2 += d * d;
      m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    p.mean = mean;
    p.std = std::sqrt(m2);
    p.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

    for (double lvl : kPercentileLevels) p.percentiles.emplace_back(lvl, detail::nearest_rank(xs, lvl));
    p.histogram_bounds = detail::equi_depth_bounds(xs, bucket_count);

    auto freq = detail::frequency_table(xs);
    p.distinct_count = freq.size();
    if (freq.size() <= kSupportCap) {
      p.support = freq;
    } else {
      p.support.reserve(kSupportCap);
      for (std::size_t i = 0; i < kSupportCap; ++i) {
        auto idx = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * n / static_cast<double>(kSupportCap));
        p.support.emplace_back(xs[std::min(idx, xs.size() - 1)], 1.0);
      }
    }

    auto ranked = freq;
    std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.second > b.second; });
    for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i)
      p.top_k.emplace_back(p.render(ranked[i].first), ranked[i].second / n);
    return p;
  }

  std::vector<std::string> xs;
  xs.reserve(values.size());
  for (const auto& v : values)
    if (v) xs.push_back(*v);
  if (xs.empty()) throw Error("untypeable column '" + p.name + "': all values are null");
  std::sort(xs.begin(), xs.end());
  auto n = static_cast<double>(xs.size());
  p.non_null_count = xs.size();
  p.null_fraction = 1.0 - n / static_cast<double>(values.size());

  auto freq = detail::frequency_table(xs);
  p.distinct_count = freq.size();
  std::stable_sort(freq.begin(), freq.end(), [](auto& a, auto& b) { return a.second > b.second; });
  for (std::size_t i = 0; i < freq.size() && i < top_k; ++i) p.top_k.emplace_back(freq[i].first, freq[i].second / n);
  if (freq.size() > kSupportCap) freq.resize(kSupportCap);
  p.value_frequencies = std::move(freq);
  return p;
}

inline ColumnProfile profile_column(const Column& column, std::size_t bucket_count = kDefaultBucketCount,
                                    std::size_t top_k = kDefaultTopK) {
  auto type = infer_logical_type(column.values);
  return profile_column(column.name, column.values, type, bucket_count, top_k);
}

/// The schema extractor: one profile per column, in source order.
inline TableSchema extract_schema(const Table& table, std::size_t bucket_count = kDefaultBucketCount,
                                  std::size_t top_k = kDefaultTopK) {
  if (table.row_count() == 0 || table.column_count() == 0)
    throw Error("cannot profile empty table '" + table.name() + "'");
  TableSchema schema;
  schema.table_name = table.name();
  schema.row_count = table.row_count();
  schema.bucket_count = bucket_count;
  for (const auto& col : table.columns()) {
    try {
      schema.columns.push_back(profile_column(col, bucket_count, top_k));
    } catch (const Error& e) {
      throw Error("column '" + col.name + "': " + e.what());
    }
  }
  return schema;
}

/// Same as extract_schema but with caller-fixed types (skips inference).
inline TableSchema extract_schema(const Table& table, const TableSchema& typed_like,
                                  std::size_t bucket_count = kDefaultBucketCount, std::size_t top_k = kDefaultTopK) {
  if (table.row_count() == 0) throw Error("cannot profile empty table '" + table.name() + "'");
  TableSchema schema;
  schema.table_name = table.name();
  schema.row_count = table.row_count();
  schema.bucket_count = bucket_count;
  for (const auto& col : table.columns()) {
    const auto* prior = typed_like.find(col.name);
    try {
      schema.columns.push_back(prior ? profile_column(col.name, col.values, prior->logical_type, bucket_count, top_k)
                                     : profile_column(col, bucket_count, top_k));
    } catch (const Error& e) {
      throw Error("column '" + col.name + "': " + e.what());
    }
  }
  return schema;
}

}  // namespace driftgen
