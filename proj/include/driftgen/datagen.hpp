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
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/table.hpp"

namespace driftgen {

/// Gaussian-kernel KDE sampler. Draws use the mixture form: pick a training
/// point (by weight), add N(0, bandwidth^2) noise, clip to the observed range.
struct NumericSampler {
  std::vector<double> training_points;
  std::vector<double> weights;  // empty means uniform
  double bandwidth = 1.0;
  double clip_low = 0.0;
  double clip_high = 0.0;
};

struct CategoricalSampler {
  std::vector<std::string> values;
  std::vector<double> weights;
};

struct ForeignKeySpec {
  std::string child_column;
  std::string parent_table;
  std::string parent_column;
};

enum class KeyWeighting { kUniform, kFrequency };

/// Silverman's rule: 0.9 * min(std, IQR/1.34) * n^(-1/5). A zero result
/// (constant data, or more than half the values tied) falls back to
/// 1e-6 * max(1, |mean|), which makes sampling an effective bootstrap.
inline double silverman_bandwidth(double std, double iqr, double mean, std::size_t n) {
  double spread = std::min(std, iqr / 1.34);
  double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  if (!(h > 0.0)) h = 1e-6 * std::max(1.0, std::abs(mean));
  return h;
}

inline NumericSampler fit_numeric(std::span<const double> values, std::size_t cap, std::uint64_t seed) {
  if (values.size() < 2) throw Error("fit_numeric needs at least 2 values");
  if (cap < 1) throw Error("fit_numeric cap must be >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto n = static_cast<double>(sorted.size());
  double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double m2 = 0.0;
  for (double x : sorted) m2 += (x - mean) * (x - mean);
  double std = std::sqrt(m2 / n);
  double iqr = detail::nearest_rank(sorted, 0.75) - detail::nearest_rank(sorted, 0.25);

  NumericSampler s;
  s.bandwidth = silverman_bandwidth(std, iqr, mean, sorted.size());
  s.clip_low = sorted.front();
  s.clip_high = sorted.back();
  if (values.size() <= cap) {
    s.training_points.assign(values.begin(), values.end());
  } else {
    auto rng = make_rng(seed, "fit_numeric");
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    // partial Fisher-Yates: the first `cap` slots become a uniform subsample
    for (std::size_t i = 0; i < cap; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    s.training_points.reserve(cap);
    for (auto i : idx) s.training_points.push_back(values[i]);
  }
  return s;
}

/// Sampler backed by a column profile's compact support.
inline NumericSampler numeric_sampler_from_profile(const ColumnProfile& p) {
  if (!is_ordered(p.logical_type) || p.support.empty() || !p.std || !p.min || !p.max)
    throw Error("column '" + p.name + "' is not profiled as numeric");
  double q1 = 0.0, q3 = 0.0;
  for (auto [lvl, v] : p.percentiles) {
    if (lvl == 0.25) q1 = v;
    if (lvl == 0.75) q3 = v;
  }
  NumericSampler s;
  s.bandwidth = silverman_bandwidth(*p.std, q3 - q1, p.mean.value_or(0.0), p.non_null_count);
  s.clip_low = *p.min;
  s.clip_high = *p.max;
  s.training_points.reserve(p.support.size());
  s.weights.reserve(p.support.size());
  bool uniform = true;
  for (auto [v, w] : p.support) {
    s.training_points.push_back(v);
    s.weights.push_back(w);
    uniform = uniform && w == p.support.front().second;
  }
  if (uniform) s.weights.clear();
  return s;
}

inline std::vector<double> sample_numeric(const NumericSampler& s, std::size_t n, Rng& rng) {
  if (s.training_points.empty()) throw Error("numeric sampler has no training points");
  if (!(s.bandwidth > 0.0)) throw Error("numeric sampler bandwidth must be positive");
  std::vector<double> out;
  out.reserve(n);
  std::normal_distribution<double> noise(0.0, s.bandwidth);
  if (s.weights.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, s.training_points.size() - 1);
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(std::clamp(s.training_points[pick(rng)] + noise(rng), s.clip_low, s.clip_high));
  } else {
    std::discrete_distribution<std::size_t> pick(s.weights.begin(), s.weights.end());
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(std::clamp(s.training_points[pick(rng)] + noise(rng), s.clip_low, s.clip_high));
  }
  return out;
}

inline std::vector<double> sample_numeric(const NumericSampler& s, std::size_t n, std::uint64_t seed) {
  auto rng = make_rng(seed, "sample_numeric");
  return sample_numeric(s, n, rng);
}

inline CategoricalSampler categorical_sampler_from_profile(const ColumnProfile& p) {
  if (p.value_frequencies.empty()) throw Error("column '" + p.name + "' is not profiled as categorical");
  CategoricalSampler s;
  for (const auto& [v, w] : p.value_frequencies) {
    s.values.push_back(v);
    s.weights.push_back(w);
  }
  return s;
}

inline std::vector<std::string> sample_categorical(const CategoricalSampler& s, std::size_t n, Rng& rng) {
  if (s.values.empty() || s.values.size() != s.weights.size()) throw Error("categorical sampler needs at least one category");
  for (double w : s.weights)
    if (!(w > 0.0)) throw Error("categorical weights must be positive");
  std::vector<std::string> out;
  out.reserve(n);
  if (s.values.size() == 1) {
    out.assign(n, s.values.front());
    return out;
  }
  std::discrete_distribution<std::size_t> pick(s.weights.begin(), s.weights.end());
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.values[pick(rng)]);
  return out;
}

inline std::vector<std::string> sample_categorical(const CategoricalSampler& s, std::size_t n, std::uint64_t seed) {
  auto rng = make_rng(seed, "sample_categorical");
  return sample_categorical(s, n, rng);
}

namespace detail {

/// Exactly round(rate * n) null positions, chosen uniformly.
inline std::vector<bool> null_mask(double rate, std::size_t n, Rng& rng) {
  std::vector<bool> mask(n, false);
  auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  k = std::min(k, n);
  if (k == 0) return mask;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
    mask[idx[i]] = true;
  }
  return mask;
}

}  // namespace detail

/// Synthesizes one column from its profile. The RNG substream depends only on
/// (seed, table, column), so columns can be generated in any order.
inline Column generate_column(const TableSchema& schema, const ColumnProfile& p, std::size_t n, std::uint64_t seed) {
  auto rng = make_rng(seed, schema.table_name, p.name);
  Column col{p.name, {}};
  col.values.reserve(n);
  auto mask = detail::null_mask(p.null_fraction, n, rng);
  std::size_t live = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), false));

  if (is_ordered(p.logical_type)) {
    auto xs = sample_numeric(numeric_sampler_from_profile(p), live, rng);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i])
        col.values.emplace_back(std::nullopt);
      else
        col.values.emplace_back(p.render(xs[k++]));
    }
  } else {
    auto xs = sample_categorical(categorical_sampler_from_profile(p), live, rng);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i])
        col.values.emplace_back(std::nullopt);
      else
        col.values.emplace_back(std::move(xs[k++]));
    }
  }
  return col;
}

/// Rows synthesized column-by-column from the schema (no cross-column correlation).
inline Table generate_rows(const TableSchema& schema, std::size_t n, std::uint64_t seed) {
  Table out(schema.table_name);
  for (const auto& p : schema.columns) {
    try {
      out.add_column(generate_column(schema, p, n, seed));
    } catch (const Error& e) {
      throw Error("cannot generate column '" + p.name + "': " + e.what());
    }
  }
  return out;
}

/// Child rows whose foreign-key column only takes values present in the parent key column.
inline Table generate_child_table(const Table& parent, const TableSchema& child_schema, const ForeignKeySpec& fk,
                                  std::size_t n, std::uint64_t seed, KeyWeighting weighting = KeyWeighting::kUniform) {
  if (!parent.find_column(fk.parent_column))
    throw Error("parent table '" + parent.name() + "' has no column '" + fk.parent_column + "'");
  if (!child_schema.find(fk.child_column))
    throw Error("child schema '" + child_schema.table_name + "' has no column '" + fk.child_column + "'");

  CategoricalSampler keys;
  {
    std::vector<std::string> present;
    for (const auto& v : parent.column(fk.parent_column).values)
      if (v) present.push_back(*v);
    if (present.empty()) throw Error("parent key column '" + fk.parent_column + "' has no non-null values");
    std::sort(present.begin(), present.end());
    for (auto [v, count] : detail::frequency_table(present)) {
      keys.values.push_back(v);
      keys.weights.push_back(weighting == KeyWeighting::kUniform ? 1.0 : count);
    }
  }

  Table out(child_schema.table_name);
  for (const auto& p : child_schema.columns) {
    if (p.name == fk.child_column) {
      auto rng = make_rng(seed, child_schema.table_name, p.name, "fk");
      Column col{p.name, {}};
      for (auto& v : sample_categorical(keys, n, rng)) col.values.emplace_back(std::move(v));
      out.add_column(std::move(col));
    } else {
      out.add_column(generate_column(child_schema, p, n, seed));
    }
  }
  return out;
}

}  // namespace driftgen
