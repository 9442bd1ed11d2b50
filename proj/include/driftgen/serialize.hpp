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

// JSON forms of the library's artifacts. Objects keep their field order, so a
// given value always serializes to the same bytes.

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "driftgen/driftops.hpp"
#include "driftgen/metrics.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/templates.hpp"
#include "driftgen/timegen.hpp"
#include "driftgen/workloads.hpp"

namespace driftgen {

using Json = nlohmann::ordered_json;

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json(std::string_view text, std::string_view what = "json") {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error("invalid " + std::string(what) + ": " + e.what());
  }
}

namespace detail {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> optional_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

template <class T>
T value_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

template <class A, class B>
Json pairs_json(const std::vector<std::pair<A, B>>& v) {
  Json out = Json::array();
  for (const auto& [a, b] : v) out.push_back(Json::array({a, b}));
  return out;
}

template <class A, class B>
std::vector<std::pair<A, B>> pairs_from(const Json& j) {
  std::vector<std::pair<A, B>> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<A>(), e.at(1).get<B>());
  return out;
}

/// Wraps json access errors so callers see a single error type.
template <class F>
auto guarded(std::string_view what, F&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error("invalid " + std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Schema

inline Json to_json(const ColumnProfile& p) {
  Json j;
  j["name"] = p.name;
  j["logical_type"] = to_string(p.logical_type);
  j["non_null_count"] = p.non_null_count;
  j["null_fraction"] = p.null_fraction;
  j["distinct_count"] = p.distinct_count;
  if (is_ordered(p.logical_type)) {
    j["min"] = detail::optional_json(p.min);
    j["max"] = detail::optional_json(p.max);
    j["mean"] = detail::optional_json(p.mean);
    j["std"] = detail::optional_json(p.std);
    j["skewness"] = detail::optional_json(p.skewness);
    j["percentiles"] = detail::pairs_json(p.percentiles);
    j["histogram_bounds"] = p.histogram_bounds;
    j["integral"] = p.integral;
    if (p.logical_type == LogicalType::kDatetime) j["datetime_format"] = to_string(p.datetime_format);
    j["support"] = detail::pairs_json(p.support);
  }
  j["top_k"] = detail::pairs_json(p.top_k);
  j["sample_values"] = p.sample_values;
  if (!is_ordered(p.logical_type)) j["value_frequencies"] = detail::pairs_json(p.value_frequencies);
  return j;
}

inline ColumnProfile column_profile_from_json(const Json& j) {
  return detail::guarded("column profile", [&] {
    ColumnProfile p;
    p.name = j.at("name").get<std::string>();
    p.logical_type = logical_type_from_string(j.at("logical_type").get<std::string>());
    p.non_null_count = j.at("non_null_count").get<std::size_t>();
    p.null_fraction = j.at("null_fraction").get<double>();
    p.distinct_count = j.at("distinct_count").get<std::size_t>();
    if (is_ordered(p.logical_type)) {
      p.min = detail::optional_from<double>(j, "min");
      p.max = detail::optional_from<double>(j, "max");
      p.mean = detail::optional_from<double>(j, "mean");
      p.std = detail::optional_from<double>(j, "std");
      p.skewness = detail::optional_from<double>(j, "skewness");
      p.percentiles = detail::pairs_from<double, double>(j.at("percentiles"));
      p.histogram_bounds = j.at("histogram_bounds").get<std::vector<double>>();
      p.integral = detail::value_or(j, "integral", false);
      if (j.contains("datetime_format"))
        p.datetime_format = datetime_format_from_string(j.at("datetime_format").get<std::string>());
      if (j.contains("support")) p.support = detail::pairs_from<double, double>(j.at("support"));
    }
    p.top_k = detail::pairs_from<std::string, double>(j.at("top_k"));
    p.sample_values = j.at("sample_values").get<std::vector<std::string>>();
    if (j.contains("value_frequencies"))
      p.value_frequencies = detail::pairs_from<std::string, double>(j.at("value_frequencies"));
    return p;
  });
}

inline Json to_json(const TableSchema& s) {
  Json j;
  j["table_name"] = s.table_name;
  j["row_count"] = s.row_count;
  j["bucket_count"] = s.bucket_count;
  Json cols = Json::array();
  for (const auto& c : s.columns) cols.push_back(to_json(c));
  j["columns"] = std::move(cols);
  return j;
}

inline TableSchema schema_from_json(const Json& j) {
  return detail::guarded("schema", [&] {
    TableSchema s;
    s.table_name = j.at("table_name").get<std::string>();
    s.row_count = j.at("row_count").get<std::size_t>();
    s.bucket_count = j.at("bucket_count").get<std::size_t>();
    for (const auto& c : j.at("columns")) s.columns.push_back(column_profile_from_json(c));
    return s;
  });
}

// ---------------------------------------------------------------------------
// Templates and workloads

inline Json to_json(const ColumnRef& c) { return Json{{"table", c.table}, {"column", c.column}}; }

inline ColumnRef column_ref_from_json(const Json& j) {
  return {j.at("table").get<std::string>(), j.at("column").get<std::string>()};
}

inline Json to_json(const Binding& b) {
  if (const auto* r = std::get_if<RangeBinding>(&b)) return Json{{"low", r->low}, {"high", r->high}};
  return Json{{"value", std::get<EqualityBinding>(b).value}};
}

inline Binding binding_from_json(const Json& j) {
  if (j.contains("value")) return EqualityBinding{j.at("value").get<std::string>()};
  return RangeBinding{j.at("low").get<double>(), j.at("high").get<double>()};
}

inline Json to_json(const QueryTemplate& t) {
  Json j;
  j["id"] = t.id;
  j["tables"] = t.tables;
  Json payload = Json::array();
  for (const auto& c : t.payload) payload.push_back(to_json(c));
  j["payload"] = std::move(payload);
  Json preds = Json::array();
  for (const auto& s : t.predicates) {
    Json p = to_json(s.column);
    p["kind"] = to_string(s.kind);
    p["type"] = to_string(s.type);
    if (s.type == LogicalType::kDatetime) p["datetime_format"] = to_string(s.datetime_format);
    if (s.binding) p["binding"] = to_json(*s.binding);
    preds.push_back(std::move(p));
  }
  j["predicates"] = std::move(preds);
  Json joins = Json::array();
  for (const auto& e : t.joins)
    joins.push_back(Json{{"left", to_json(e.left)}, {"right", to_json(e.right)}, {"similarity", e.similarity}});
  j["joins"] = std::move(joins);
  j["join_fallback"] = t.join_fallback;
  return j;
}

inline QueryTemplate template_from_json(const Json& j) {
  return detail::guarded("template", [&] {
    QueryTemplate t;
    t.tables = j.at("tables").get<std::vector<std::string>>();
    for (const auto& c : j.at("payload")) t.payload.push_back(column_ref_from_json(c));
    for (const auto& p : j.at("predicates")) {
      PredicateSlot s;
      s.column = column_ref_from_json(p);
      s.kind = predicate_kind_from_string(p.at("kind").get<std::string>());
      s.type = logical_type_from_string(p.at("type").get<std::string>());
      if (p.contains("datetime_format"))
        s.datetime_format = datetime_format_from_string(p.at("datetime_format").get<std::string>());
      if (p.contains("binding")) s.binding = binding_from_json(p.at("binding"));
      t.predicates.push_back(std::move(s));
    }
    if (j.contains("joins"))
      for (const auto& e : j.at("joins"))
        t.joins.push_back({column_ref_from_json(e.at("left")), column_ref_from_json(e.at("right")),
                           detail::value_or(e, "similarity", 0.0)});
    t.join_fallback = detail::value_or(j, "join_fallback", false);
    // ids are derived from structure; a stored id must agree with it
    assign_id(t);
    if (j.contains("id") && j.at("id").get<std::string>() != t.id)
      throw Error("template id " + j.at("id").get<std::string>() + " does not match its structure (" + t.id + ")");
    return t;
  });
}

inline Json to_json(std::span<const QueryTemplate> templates) {
  Json out = Json::array();
  for (const auto& t : templates) out.push_back(to_json(t));
  return out;
}

inline std::vector<QueryTemplate> templates_from_json(const Json& j) {
  std::vector<QueryTemplate> out;
  for (const auto& t : j) out.push_back(template_from_json(t));
  return out;
}

/// Timestamp offsets are rounded to millisecond (3-decimal) precision.
inline double round_millis(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

inline Json to_json(const QueryInstance& q, std::size_t query_id) {
  Json j;
  j["query_id"] = query_id;
  j["template_id"] = q.template_id;
  j["group_id"] = q.group_id;
  Json b = Json::array();
  for (const auto& x : q.bindings) b.push_back(to_json(x));
  j["bindings"] = std::move(b);
  Json c = Json::array();
  for (const auto& x : q.centers) c.push_back(detail::optional_json(x));
  j["centers"] = std::move(c);
  j["timestamp"] = q.timestamp ? Json(round_millis(*q.timestamp)) : Json(nullptr);
  j["seed"] = q.seed;
  j["sql"] = q.sql;
  return j;
}

inline QueryInstance instance_from_json(const Json& j) {
  return detail::guarded("query instance", [&] {
    QueryInstance q;
    q.template_id = j.at("template_id").get<std::string>();
    q.group_id = detail::value_or<std::int64_t>(j, "group_id", 0);
    for (const auto& b : j.at("bindings")) q.bindings.push_back(binding_from_json(b));
    if (j.contains("centers"))
      for (const auto& c : j.at("centers"))
        q.centers.push_back(c.is_null() ? std::nullopt : std::optional<double>(c.get<double>()));
    else
      q.centers.assign(q.bindings.size(), std::nullopt);
    q.timestamp = detail::optional_from<double>(j, "timestamp");
    q.seed = detail::value_or<std::uint64_t>(j, "seed", 0);
    q.sql = detail::value_or<std::string>(j, "sql", "");
    return q;
  });
}

/// Workload sidecar: the templates used plus one record per instance.
inline Json workload_sidecar(std::span<const QueryTemplate> templates, const Workload& w) {
  Json j;
  j["templates"] = to_json(templates);
  Json inst = Json::array();
  for (std::size_t i = 0; i < w.size(); ++i) inst.push_back(to_json(w[i], i));
  j["instances"] = std::move(inst);
  return j;
}

struct WorkloadFile {
  std::vector<QueryTemplate> templates;
  Workload instances;
};

inline WorkloadFile workload_from_json(const Json& j) {
  return detail::guarded("workload sidecar", [&] {
    WorkloadFile f;
    f.templates = templates_from_json(j.at("templates"));
    for (const auto& q : j.at("instances")) f.instances.push_back(instance_from_json(q));
    return f;
  });
}

// ---------------------------------------------------------------------------
// Configuration pieces

inline Json to_json(const DriftThresholds& t) { return Json{{"alpha", t.alpha}, {"epsilon", t.epsilon}}; }

inline DriftThresholds thresholds_from_json(const Json& j, DriftThresholds fallback = {}) {
  DriftThresholds t;
  t.alpha = detail::value_or(j, "alpha", fallback.alpha);
  t.epsilon = detail::value_or(j, "epsilon", fallback.epsilon);
  t.validate();
  return t;
}

inline Json to_json(const DriftSpec& s) {
  Json j;
  j["op"] = to_string(s.op);
  j["columns"] = s.target_columns;
  Json p = Json::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScaleParams>) {
          p["factor"] = v.factor;
          p["regenerate"] = v.regenerate;
        } else if constexpr (std::is_same_v<T, UpdateParams>) {
          p["insert_count"] = v.insert_count;
          p["delete_fraction"] = v.delete_fraction;
          p["stratify_column"] = detail::optional_json(v.stratify_column);
        } else if constexpr (std::is_same_v<T, ShiftParams>) {
          p["target_skewness"] = detail::optional_json(v.target_skewness);
          p["boost"] = v.boost;
          p["top_m"] = v.top_m;
        } else {
          p["values"] = v.values;
          if (v.rule) p["rule"] = Json{{"count", v.rule->count}, {"k", v.rule->k}};
        }
      },
      s.params);
  j["params"] = std::move(p);
  j["thresholds"] = to_json(s.thresholds);
  return j;
}

/// Outlier values may be given as JSON numbers or strings.
inline std::string outlier_value_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  throw Error("outlier values must be numbers or strings");
}

inline DriftSpec drift_spec_from_json(const Json& j, DriftThresholds default_thresholds = {}) {
  return detail::guarded("drift spec", [&] {
    DriftSpec s;
    s.op = drift_op_from_string(j.at("op").get<std::string>());
    if (j.contains("columns")) s.target_columns = j.at("columns").get<std::vector<std::string>>();
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    switch (s.op) {
      case DriftOp::kScaleCardinality:
        s.params = ScaleParams{detail::value_or(params, "factor", 1.0), detail::value_or(params, "regenerate", false)};
        break;
      case DriftOp::kUpdateCardinality:
        s.params = UpdateParams{detail::value_or<std::size_t>(params, "insert_count", 0),
                                detail::value_or(params, "delete_fraction", 0.0),
                                detail::optional_from<std::string>(params, "stratify_column")};
        break;
      case DriftOp::kShiftDistribution:
        s.params = ShiftParams{detail::optional_from<double>(params, "target_skewness"),
                               detail::value_or(params, "boost", 1.0), detail::value_or<std::size_t>(params, "top_m", 1)};
        break;
      case DriftOp::kInjectOutliers: {
        OutlierParams o;
        if (params.contains("values"))
          for (const auto& v : params.at("values")) o.values.push_back(outlier_value_text(v));
        if (params.contains("rule")) {
          const auto& r = params.at("rule");
          o.rule = OutlierRule{detail::value_or<std::size_t>(r, "count", 1), detail::value_or(r, "k", 3.0)};
        }
        s.params = std::move(o);
        break;
      }
    }
    s.thresholds = j.contains("thresholds") ? thresholds_from_json(j.at("thresholds"), default_thresholds)
                                            : default_thresholds;
    return s;
  });
}

inline Json to_json(const ChangeLog& log) {
  Json j;
  j["op_applied"] = to_json(log.op_applied);
  j["seed"] = log.seed;
  j["inserted_row_indices"] = log.inserted_row_indices;
  j["deleted_row_indices"] = log.deleted_row_indices;
  j["modified_columns"] = log.modified_columns;
  return j;
}

inline Json to_json(const DriftReport& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["magnitude"] = r.magnitude;
  j["threshold_used"] = r.threshold_used;
  j["verdict"] = r.verdict;
  Json per = Json::object();
  for (const auto& [k, v] : r.per_column_divergence) per[k] = v;
  j["per_column_divergence"] = std::move(per);
  Json det = Json::object();
  for (const auto& [k, v] : r.details) det[k] = v;
  j["details"] = std::move(det);
  return j;
}

inline Json to_json(const SelectivityReport& r) {
  Json j;
  j["mean"] = r.mean;
  Json g = Json::object();
  for (const auto& [k, v] : r.group_means) g[std::to_string(k)] = v;
  j["group_means"] = std::move(g);
  j["per_query"] = r.per_query;
  return j;
}

inline Json to_json(const ParamSamplerSpec& s) {
  Json j;
  j["distribution"] = to_string(s.distribution);
  j["mean"] = detail::optional_json(s.mean);
  j["std"] = detail::optional_json(s.std);
  j["exponent"] = s.exponent;
  j["domain"] = s.domain ? Json::array({s.domain->first, s.domain->second}) : Json(nullptr);
  j["mode"] = to_string(s.mode);
  return j;
}

inline ParamSamplerSpec sampler_spec_from_json(const Json& j) {
  return detail::guarded("sampler spec", [&] {
    ParamSamplerSpec s;
    if (j.is_string()) {
      s.distribution = param_distribution_from_string(j.get<std::string>());
      return s;
    }
    s.distribution = param_distribution_from_string(detail::value_or<std::string>(j, "distribution", "uniform"));
    s.mean = detail::optional_from<double>(j, "mean");
    s.std = detail::optional_from<double>(j, "std");
    s.exponent = detail::value_or(j, "exponent", 1.0);
    s.mode = draw_mode_from_string(detail::value_or<std::string>(j, "mode", "stratified"));
    if (j.contains("domain") && !j.at("domain").is_null())
      s.domain = std::pair{j.at("domain").at(0).get<double>(), j.at("domain").at(1).get<double>()};
    return s;
  });
}

inline Json to_json(const TemporalPattern& p) {
  Json j;
  j["kind"] = to_string(p.kind);
  j["window_seconds"] = p.window_seconds;
  j["period_seconds"] = p.period_seconds;
  j["burst_size"] = p.burst_size;
  j["start_rate"] = detail::optional_json(p.start_rate);
  j["end_rate"] = detail::optional_json(p.end_rate);
  j["decay_rate"] = detail::optional_json(p.decay_rate);
  j["sampled"] = p.sampled;
  return j;
}

inline TemporalPattern temporal_pattern_from_json(const Json& j) {
  return detail::guarded("temporal pattern", [&] {
    TemporalPattern p;
    if (j.is_string()) {
      p.kind = pattern_kind_from_string(j.get<std::string>());
      return p;
    }
    p.kind = pattern_kind_from_string(detail::value_or<std::string>(j, "kind", "uniform"));
    p.window_seconds = detail::value_or(j, "window_seconds", p.window_seconds);
    p.period_seconds = detail::value_or(j, "period_seconds", p.period_seconds);
    p.burst_size = detail::value_or(j, "burst_size", p.burst_size);
    p.start_rate = detail::optional_from<double>(j, "start_rate");
    p.end_rate = detail::optional_from<double>(j, "end_rate");
    p.decay_rate = detail::optional_from<double>(j, "decay_rate");
    p.sampled = detail::value_or(j, "sampled", false);
    return p;
  });
}

inline Json to_json(const TemplateConstraints& c) {
  return Json{{"max_predicates", c.max_predicates},
              {"max_payload", c.max_payload},
              {"join_probability", c.join_probability},
              {"threshold", c.threshold},
              {"max_tables", c.max_tables}};
}

inline TemplateConstraints constraints_from_json(const Json& j) {
  return detail::guarded("template constraints", [&] {
    TemplateConstraints c;
    c.max_predicates = detail::value_or(j, "max_predicates", c.max_predicates);
    c.max_payload = detail::value_or(j, "max_payload", c.max_payload);
    c.join_probability = detail::value_or(j, "join_probability", c.join_probability);
    c.threshold = detail::value_or(j, "threshold", c.threshold);
    c.max_tables = detail::value_or(j, "max_tables", c.max_tables);
    return c;
  });
}

}  // namespace driftgen
