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
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "driftgen/common.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/templates.hpp"

namespace driftgen {

/// `frequency` is only meaningful for equality slots (draw values by their
/// observed frequency); it is the default there.
enum class ParamDistribution { kUniform, kNormal, kZipfian, kFrequency };

inline std::string to_string(ParamDistribution d) {
  switch (d) {
    case ParamDistribution::kUniform: return "uniform";
    case ParamDistribution::kNormal: return "normal";
    case ParamDistribution::kZipfian: return "zipfian";
    case ParamDistribution::kFrequency: return "frequency";
  }
  return "";
}

inline ParamDistribution param_distribution_from_string(std::string_view s) {
  if (s == "uniform") return ParamDistribution::kUniform;
  if (s == "normal") return ParamDistribution::kNormal;
  if (s == "zipfian" || s == "zipf") return ParamDistribution::kZipfian;
  if (s == "frequency") return ParamDistribution::kFrequency;
  throw Error("unknown parameter distribution '" + std::string(s) + "'");
}

/// How the n draws of one phase are made. Stratified draws map probability
/// levels (perm[k] + U_k) / n through the inverse CDF, so each of the n
/// equal-probability strata holds exactly one draw and the phase's empirical
/// distribution tracks the configured one closely; independent draws are iid.
enum class DrawMode { kStratified, kIndependent };

inline std::string to_string(DrawMode m) { return m == DrawMode::kStratified ? "stratified" : "iid"; }

inline DrawMode draw_mode_from_string(std::string_view s) {
  if (s == "stratified") return DrawMode::kStratified;
  if (s == "iid" || s == "independent") return DrawMode::kIndependent;
  throw Error("unknown draw mode '" + std::string(s) + "'");
}

/// The parameter-generating operator for one predicate slot. Unset normal
/// moments and domain default to the column profile.
struct ParamSamplerSpec {
  ParamDistribution distribution = ParamDistribution::kUniform;
  std::optional<double> mean;
  std::optional<double> std;
  double exponent = 1.0;
  std::optional<std::pair<double, double>> domain;
  DrawMode mode = DrawMode::kStratified;

  bool operator==(const ParamSamplerSpec&) const = default;
};

inline constexpr std::size_t kZipfDistinctLimit = 1000;

/// Draws range-predicate centers; every draw lies inside `domain`.
class CenterSampler {
 public:
  CenterSampler(ParamDistribution dist, double low, double high) : dist_(dist), low_(low), high_(high) {}

  static CenterSampler uniform(double low, double high) { return CenterSampler(ParamDistribution::kUniform, low, high); }

  static CenterSampler normal(double mean, double std, double low, double high) {
    CenterSampler s(ParamDistribution::kNormal, low, high);
    s.mean_ = mean;
    s.std_ = std;
    return s;
  }

  /// Rank r (1-based, in the given order) is drawn with probability proportional to r^(-exponent).
  static CenterSampler zipfian(std::vector<double> ranked_values, double exponent, double low, double high) {
    if (ranked_values.empty()) throw Error("zipfian sampler needs at least one value");
    CenterSampler s(ParamDistribution::kZipfian, low, high);
    s.ranked_ = std::move(ranked_values);
    s.cdf_.reserve(s.ranked_.size());
    double acc = 0.0;
    for (std::size_t r = 1; r <= s.ranked_.size(); ++r) {
      acc += std::pow(static_cast<double>(r), -exponent);
      s.cdf_.push_back(acc);
    }
    for (auto& c : s.cdf_) c /= acc;
    return s;
  }

  /// Inverse CDF at probability level u in [0, 1), clamped to the domain.
  double quantile(double u) const {
    double x = low_;
    switch (dist_) {
      case ParamDistribution::kUniform:
        x = low_ + u * (high_ - low_);
        break;
      case ParamDistribution::kNormal: {
        double v = std::clamp(u, 1e-300, 1.0 - 1e-16);
        x = mean_ - std_ * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * v);
        break;
      }
      case ParamDistribution::kZipfian:
      case ParamDistribution::kFrequency: {
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), ranked_.size() - 1);
        x = ranked_[idx];
        break;
      }
    }
    return std::clamp(x, low_, high_);
  }

  double draw(Rng& rng) const { return quantile(std::uniform_real_distribution<double>(0.0, 1.0)(rng)); }

  ParamDistribution distribution() const { return dist_; }
  DrawMode mode() const { return mode_; }
  CenterSampler& with_mode(DrawMode m) {
    mode_ = m;
    return *this;
  }
  double low() const { return low_; }
  double high() const { return high_; }
  const std::vector<double>& ranked_values() const { return ranked_; }

 private:
  ParamDistribution dist_;
  DrawMode mode_ = DrawMode::kStratified;
  double low_;
  double high_;
  double mean_ = 0.0;
  double std_ = 1.0;
  std::vector<double> ranked_;
  std::vector<double> cdf_;
};

/// Draws values for equality predicates.
struct EqualitySampler {
  std::vector<std::string> values;
  std::vector<double> weights;
  DrawMode mode = DrawMode::kStratified;

  /// Value whose cumulative-weight interval contains u * total weight.
  const std::string& quantile(double u) const {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double target = u * total, acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      acc += weights[i];
      if (target < acc) return values[i];
    }
    return values.back();
  }

  std::string draw(Rng& rng) const { return quantile(std::uniform_real_distribution<double>(0.0, 1.0)(rng)); }
};

using SlotSampler = std::variant<CenterSampler, EqualitySampler>;

/// Values to rank for zipfian centers: distinct values by descending frequency
/// when there are at most 1000 of them, otherwise equi-depth bucket midpoints
/// by descending density. Ties go to the smaller value.
inline std::vector<double> zipf_ranked_support(const ColumnProfile& p) {
  std::vector<std::pair<double, double>> scored;  // (value, score)
  bool exact = p.distinct_count <= kZipfDistinctLimit && p.support.size() == p.distinct_count;
  if (exact) {
    scored = p.support;
  } else {
    const auto& b = p.histogram_bounds;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      double width = b[i + 1] - b[i];
      double density = width > 0.0 ? 1.0 / width : std::numeric_limits<double>::infinity();
      scored.emplace_back(0.5 * (b[i] + b[i + 1]), density);
    }
    std::sort(scored.begin(), scored.end());
    scored.erase(std::unique(scored.begin(), scored.end(), [](auto& x, auto& y) { return x.first == y.first; }),
                 scored.end());
  }
  std::stable_sort(scored.begin(), scored.end(), [](auto& x, auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  std::vector<double> out;
  out.reserve(scored.size());
  for (auto& s : scored) out.push_back(s.first);
  return out;
}

inline CenterSampler make_center_sampler(const ColumnProfile& profile, const ParamSamplerSpec& spec) {
  if (!is_ordered(profile.logical_type))
    throw Error("center sampler needs a numeric or datetime column, '" + profile.name + "' is " +
                to_string(profile.logical_type));
  auto [low, high] = spec.domain.value_or(std::pair{*profile.min, *profile.max});
  if (!(low <= high)) throw Error("sampler domain low must be <= high");
  switch (spec.distribution) {
    case ParamDistribution::kUniform: return CenterSampler::uniform(low, high).with_mode(spec.mode);
    case ParamDistribution::kNormal: {
      double mean = spec.mean.value_or(*profile.mean);
      double std = spec.std.value_or(*profile.std);
      if (!(std > 0.0)) throw Error("normal sampler std must be > 0");
      return CenterSampler::normal(mean, std, low, high).with_mode(spec.mode);
    }
    case ParamDistribution::kZipfian:
      if (!(spec.exponent > 0.0)) throw Error("zipfian exponent must be > 0");
      return CenterSampler::zipfian(zipf_ranked_support(profile), spec.exponent, low, high).with_mode(spec.mode);
    case ParamDistribution::kFrequency: break;
  }
  throw Error("distribution '" + to_string(spec.distribution) + "' is not valid for range predicates");
}

inline EqualitySampler make_equality_sampler(const ColumnProfile& profile, const ParamSamplerSpec& spec) {
  if (profile.value_frequencies.empty())
    throw Error("equality sampler needs a categorical column, '" + profile.name + "' is " + to_string(profile.logical_type));
  EqualitySampler s;
  s.mode = spec.mode;
  std::size_t rank = 1;
  for (const auto& [v, count] : profile.value_frequencies) {
    s.values.push_back(v);
    switch (spec.distribution) {
      case ParamDistribution::kUniform: s.weights.push_back(1.0); break;
      case ParamDistribution::kFrequency: s.weights.push_back(count); break;
      case ParamDistribution::kZipfian:
        if (!(spec.exponent > 0.0)) throw Error("zipfian exponent must be > 0");
        s.weights.push_back(std::pow(static_cast<double>(rank), -spec.exponent));
        break;
      case ParamDistribution::kNormal: throw Error("normal distribution is not valid for equality predicates");
    }
    ++rank;
  }
  return s;
}

/// One sampler per predicate slot of `t`. Slots whose column has no entry in
/// `specs` use `fallback` (range) or frequency sampling (equality).
inline std::vector<SlotSampler> make_slot_samplers(const QueryTemplate& t, std::span<const TableSchema> schemas,
                                                   const std::map<std::string, ParamSamplerSpec>& specs,
                                                   const ParamSamplerSpec& fallback = {}) {
  std::vector<SlotSampler> out;
  for (const auto& slot : t.predicates) {
    const auto& prof = detail::schema_named(schemas, slot.column.table).at(slot.column.column);
    auto it = specs.find(slot.column.column);
    if (it == specs.end()) it = specs.find(slot.column.qualified());
    if (slot.kind == PredicateKind::kRange) {
      out.emplace_back(make_center_sampler(prof, it != specs.end() ? it->second : fallback));
    } else {
      ParamSamplerSpec eq{ParamDistribution::kFrequency, {}, {}, 1.0, {}, fallback.mode};
      out.emplace_back(make_equality_sampler(prof, it != specs.end() ? it->second : eq));
    }
  }
  return out;
}

inline DrawMode mode_of(const CenterSampler& s) { return s.mode(); }
inline DrawMode mode_of(const EqualitySampler& s) { return s.mode; }

namespace detail {

/// n probability levels in [0, 1): iid uniforms, or one uniform point per
/// stratum [k/n, (k+1)/n) with the strata visited in random order.
inline std::vector<double> draw_levels(std::size_t n, DrawMode mode, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> u(n);
  if (mode == DrawMode::kIndependent) {
    for (auto& x : u) x = unit(rng);
    return u;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  for (std::size_t k = 0; k < n; ++k)
    u[k] = std::min((static_cast<double>(perm[k]) + unit(rng)) / static_cast<double>(n), std::nextafter(1.0, 0.0));
  return u;
}

}  // namespace detail

struct QueryInstance {
  std::string template_id;
  std::vector<Binding> bindings;
  /// Drawn center per range slot, before domain intersection.
  std::vector<std::optional<double>> centers;
  std::string sql;
  std::optional<double> timestamp;
  std::int64_t group_id = 0;
  std::uint64_t seed = 0;
};

using Workload = std::vector<QueryInstance>;

/// Binds n instances of `t`. Range slot i becomes
/// [center - widths[i]/2, center + widths[i]/2] intersected with the sampler domain.
/// Draws come from substream (seed, group_id).
inline Workload instantiate(const QueryTemplate& t, std::span<const SlotSampler> samplers,
                            std::span<const double> widths, std::size_t n, std::uint64_t seed,
                            std::int64_t group_id = 0) {
  if (samplers.size() != t.predicates.size())
    throw Error("template " + t.id + " needs " + std::to_string(t.predicates.size()) + " samplers, got " +
                std::to_string(samplers.size()));
  if (widths.size() != t.predicates.size())
    throw Error("template " + t.id + " needs one width per predicate slot");
  for (std::size_t i = 0; i < t.predicates.size(); ++i) {
    bool range = t.predicates[i].kind == PredicateKind::kRange;
    if (range != std::holds_alternative<CenterSampler>(samplers[i]))
      throw Error("sampler kind does not match predicate slot " + std::to_string(i) + " of template " + t.id);
    if (range && !(widths[i] >= 0.0)) throw Error("predicate width must be >= 0");
  }

  auto group_seed = substream(seed, "group", group_id);
  Rng rng(group_seed);
  // probability levels per slot, drawn slot by slot
  std::vector<std::vector<double>> levels;
  for (const auto& sampler : samplers) {
    auto mode = std::visit([](const auto& s) { return mode_of(s); }, sampler);
    levels.push_back(detail::draw_levels(n, mode, rng));
  }

  Workload out;
  out.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    QueryInstance inst;
    inst.template_id = t.id;
    inst.group_id = group_id;
    inst.seed = group_seed;
    for (std::size_t i = 0; i < t.predicates.size(); ++i) {
      if (const auto* cs = std::get_if<CenterSampler>(&samplers[i])) {
        double c = cs->quantile(levels[i][q]);
        double lo = std::max(c - widths[i] / 2.0, cs->low());
        double hi = std::min(c + widths[i] / 2.0, cs->high());
        inst.bindings.emplace_back(RangeBinding{lo, hi});
        inst.centers.emplace_back(c);
      } else {
        inst.bindings.emplace_back(EqualityBinding{std::get<EqualitySampler>(samplers[i]).quantile(levels[i][q])});
        inst.centers.emplace_back(std::nullopt);
      }
    }
    inst.sql = render_sql(t, inst.bindings);
    out.push_back(std::move(inst));
  }
  return out;
}

struct WidthSchedule {
  double start = 10.0;
  double end = 10.0;
  std::size_t groups = 1;

  /// Linear from start to end; a single group uses start.
  double width(std::size_t g) const {
    if (groups <= 1) return start;
    return start + static_cast<double>(g) * (end - start) / static_cast<double>(groups - 1);
  }
};

/// Groups 0..groups-1 with the range on `slot` widened along the schedule.
inline Workload vary_selectivity(const QueryTemplate& t, std::span<const SlotSampler> samplers,
                                 std::span<const double> base_widths, std::size_t slot, const WidthSchedule& schedule,
                                 std::size_t per_group, std::uint64_t seed, std::int64_t first_group = 0) {
  if (schedule.groups < 1) throw Error("width schedule needs at least one group");
  if (!(schedule.start > 0.0 && schedule.end > 0.0)) throw Error("width schedule bounds must be > 0");
  if (slot >= t.predicates.size() || t.predicates[slot].kind != PredicateKind::kRange)
    throw Error("slot " + std::to_string(slot) + " of template " + t.id + " is not a range predicate");
  Workload out;
  std::vector<double> widths(base_widths.begin(), base_widths.end());
  for (std::size_t g = 0; g < schedule.groups; ++g) {
    widths[slot] = schedule.width(g);
    auto part = instantiate(t, samplers, widths, per_group, seed, first_group + static_cast<std::int64_t>(g));
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

/// Two phases of the same template: group 0 uses `base`, group 1 uses `drifted`.
inline std::pair<Workload, Workload> drift_workload(const QueryTemplate& t, std::span<const SlotSampler> base,
                                                    std::span<const SlotSampler> drifted, std::span<const double> widths,
                                                    std::size_t n_per_phase, std::uint64_t seed) {
  return {instantiate(t, base, widths, n_per_phase, seed, 0), instantiate(t, drifted, widths, n_per_phase, seed, 1)};
}

}  // namespace driftgen
