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
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/similarity.hpp"

namespace driftgen {

struct ColumnRef {
  std::string table;
  std::string column;

  std::string qualified() const { return table + "." + column; }
  auto operator<=>(const ColumnRef&) const = default;
};

enum class PredicateKind { kRange, kEquality };

inline std::string to_string(PredicateKind k) { return k == PredicateKind::kRange ? "range" : "equality"; }

inline PredicateKind predicate_kind_from_string(std::string_view s) {
  if (s == "range") return PredicateKind::kRange;
  if (s == "equality") return PredicateKind::kEquality;
  throw Error("unknown predicate kind '" + std::string(s) + "'");
}

struct RangeBinding {
  double low = 0.0;
  double high = 0.0;
  bool operator==(const RangeBinding&) const = default;
};

struct EqualityBinding {
  std::string value;
  bool operator==(const EqualityBinding&) const = default;
};

using Binding = std::variant<RangeBinding, EqualityBinding>;

struct PredicateSlot {
  ColumnRef column;
  PredicateKind kind = PredicateKind::kRange;
  LogicalType type = LogicalType::kNumeric;
  DatetimeFormat datetime_format = DatetimeFormat::kDate;
  std::optional<Binding> binding;
};

struct JoinEdge {
  ColumnRef left;
  ColumnRef right;
  double similarity = 0.0;

  bool operator==(const JoinEdge&) const = default;
};

struct QueryTemplate {
  std::string id;
  std::vector<std::string> tables;
  std::vector<ColumnRef> payload;
  std::vector<PredicateSlot> predicates;
  std::vector<JoinEdge> joins;
  /// Set when a join was requested but no candidate existed.
  bool join_fallback = false;
};

struct TemplateConstraints {
  std::size_t max_predicates = 5;
  std::size_t max_payload = 6;
  double join_probability = 0.0;
  double threshold = 0.8;
  std::size_t max_tables = 2;
};

struct TemplateMutation {
  std::size_t drop_predicates = 0;
  std::size_t add_predicates = 0;
  std::optional<std::vector<std::string>> set_payload;
  bool toggle_join = false;
};

// ---------------------------------------------------------------------------

/// Structural fingerprint: identical structure yields the identical id.
inline std::string structural_id(const QueryTemplate& t) {
  std::string key;
  for (const auto& tb : t.tables) key += "T" + tb + ";";
  for (const auto& p : t.payload) key += "P" + p.qualified() + ";";
  for (const auto& s : t.predicates) key += "W" + s.column.qualified() + ":" + to_string(s.kind) + ";";
  for (const auto& j : t.joins) key += "J" + j.left.qualified() + "=" + j.right.qualified() + ";";
  return "tpl-" + hex64(detail::fnv1a(key));
}

inline void assign_id(QueryTemplate& t) { t.id = structural_id(t); }

/// Checks the template's structural invariants against the schemas.
inline void validate_template(const QueryTemplate& t, std::span<const TableSchema> schemas) {
  auto find_schema = [&](const std::string& name) -> const TableSchema& {
    for (const auto& s : schemas)
      if (s.table_name == name) return s;
    throw Error("template " + t.id + " references unknown table '" + name + "'");
  };
  if (t.tables.empty()) throw Error("template " + t.id + " has no tables");
  std::set<std::string> tables(t.tables.begin(), t.tables.end());
  if (tables.size() != t.tables.size()) throw Error("template " + t.id + " lists a table twice");
  auto check_ref = [&](const ColumnRef& c) -> const ColumnProfile& {
    if (!tables.count(c.table)) throw Error("template " + t.id + " references column of unlisted table " + c.table);
    return find_schema(c.table).at(c.column);
  };
  if (t.payload.empty()) throw Error("template " + t.id + " has an empty payload");
  for (const auto& p : t.payload) check_ref(p);
  for (const auto& s : t.predicates) {
    const auto& prof = check_ref(s.column);
    if (s.kind == PredicateKind::kRange && !is_ordered(prof.logical_type))
      throw Error("range predicate on non-ordered column " + s.column.qualified());
    if (s.kind == PredicateKind::kEquality && is_ordered(prof.logical_type))
      throw Error("equality predicate on ordered column " + s.column.qualified());
    if (s.binding) {
      if (auto* r = std::get_if<RangeBinding>(&*s.binding); r && r->low > r->high)
        throw Error("range binding with low > high on " + s.column.qualified());
    }
  }
  // every table after the first must be connected through a join edge
  if (t.tables.size() > 1) {
    std::set<std::string> reached{t.tables.front()};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& j : t.joins) {
        check_ref(j.left);
        check_ref(j.right);
        if (reached.count(j.left.table) != reached.count(j.right.table)) {
          reached.insert(j.left.table);
          reached.insert(j.right.table);
          grew = true;
        }
      }
    }
    if (reached.size() != tables.size()) throw Error("template " + t.id + " has a disconnected join graph");
  }
}

// ---------------------------------------------------------------------------
// Join inference

/// Cross-table column pairs with identical logical type and name similarity
/// >= threshold, most similar first. Each edge has left.table < right.table, so
/// the result does not depend on the order of `schemas`.
inline std::vector<JoinEdge> infer_join_candidates(std::span<const TableSchema> schemas, double threshold = 0.8) {
  std::vector<JoinEdge> edges;
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    for (std::size_t j = i + 1; j < schemas.size(); ++j) {
      const auto* a = &schemas[i];
      const auto* b = &schemas[j];
      if (b->table_name < a->table_name) std::swap(a, b);
      for (const auto& ca : a->columns) {
        for (const auto& cb : b->columns) {
          if (ca.logical_type != cb.logical_type) continue;
          double sim = name_similarity(ca.name, cb.name);
          if (sim < threshold) continue;
          edges.push_back({{a->table_name, ca.name}, {b->table_name, cb.name}, sim});
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const JoinEdge& x, const JoinEdge& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return std::tie(x.left, x.right) < std::tie(y.left, y.right);
  });
  return edges;
}

// ---------------------------------------------------------------------------
// Generation

namespace detail {

inline const TableSchema& schema_named(std::span<const TableSchema> schemas, const std::string& name) {
  for (const auto& s : schemas)
    if (s.table_name == name) return s;
  throw Error("unknown table '" + name + "'");
}

inline std::vector<PredicateSlot> predicate_candidates(std::span<const TableSchema> schemas,
                                                       const std::vector<std::string>& tables) {
  std::vector<PredicateSlot> out;
  for (const auto& tb : tables) {
    for (const auto& c : schema_named(schemas, tb).columns) {
      if (is_ordered(c.logical_type))
        out.push_back({{tb, c.name}, PredicateKind::kRange, c.logical_type, c.datetime_format, std::nullopt});
      else if (c.logical_type == LogicalType::kCategorical)
        out.push_back({{tb, c.name}, PredicateKind::kEquality, c.logical_type, c.datetime_format, std::nullopt});
    }
  }
  return out;
}

inline std::vector<ColumnRef> payload_candidates(std::span<const TableSchema> schemas,
                                                 const std::vector<std::string>& tables) {
  std::vector<ColumnRef> out;
  for (const auto& tb : tables)
    for (const auto& c : schema_named(schemas, tb).columns) out.push_back({tb, c.name});
  return out;
}

/// Picks k of n positions uniformly without replacement, returned ascending.
inline std::vector<std::size_t> choose(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k && i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(std::min(k, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline std::size_t uniform_count(std::size_t lo, std::size_t hi, Rng& rng) {
  if (hi <= lo) return hi;
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Grows a join chain from `seed_edge`, repeatedly adding the most similar
/// candidate edge that reaches a new table.
inline std::pair<std::vector<std::string>, std::vector<JoinEdge>> join_chain(const std::vector<JoinEdge>& candidates,
                                                                             const JoinEdge& seed_edge,
                                                                             std::size_t table_count) {
  std::vector<std::string> tables{seed_edge.left.table, seed_edge.right.table};
  std::vector<JoinEdge> joins{seed_edge};
  while (tables.size() < table_count) {
    bool added = false;
    for (const auto& e : candidates) {
      bool has_l = std::find(tables.begin(), tables.end(), e.left.table) != tables.end();
      bool has_r = std::find(tables.begin(), tables.end(), e.right.table) != tables.end();
      if (has_l == has_r) continue;
      tables.push_back(has_l ? e.right.table : e.left.table);
      joins.push_back(e);
      added = true;
      break;
    }
    if (!added) break;
  }
  return {tables, joins};
}

}  // namespace detail

/// Generates `count` templates. Template i draws from substream (seed, i):
/// predicate count uniform in [1, max_predicates], payload size uniform in
/// [1, max_payload], both capped by the available columns.
inline std::vector<QueryTemplate> generate_templates(std::span<const TableSchema> schemas,
                                                     const TemplateConstraints& constraints, std::size_t count,
                                                     std::uint64_t seed) {
  if (schemas.empty()) throw Error("generate_templates needs at least one schema");
  if (constraints.max_payload < 1) throw Error("max_payload must be >= 1");
  std::vector<JoinEdge> candidates;
  if (schemas.size() > 1 && constraints.join_probability > 0.0)
    candidates = infer_join_candidates(schemas, constraints.threshold);

  std::vector<QueryTemplate> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = make_rng(seed, "template", i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    QueryTemplate t;
    bool want_join = schemas.size() > 1 && u(rng) < constraints.join_probability;
    if (want_join && !candidates.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      auto k = detail::uniform_count(2, std::max<std::size_t>(2, constraints.max_tables), rng);
      auto [tables, joins] = detail::join_chain(candidates, candidates[pick(rng)], k);
      t.tables = std::move(tables);
      t.joins = std::move(joins);
    } else {
      t.join_fallback = want_join;
      std::uniform_int_distribution<std::size_t> pick(0, schemas.size() - 1);
      t.tables = {schemas[pick(rng)].table_name};
    }

    auto preds = detail::predicate_candidates(schemas, t.tables);
    auto np = preds.empty() ? 0 : detail::uniform_count(1, std::min(constraints.max_predicates, preds.size()), rng);
    for (auto idx : detail::choose(preds.size(), np, rng)) t.predicates.push_back(preds[idx]);

    auto cols = detail::payload_candidates(schemas, t.tables);
    auto nc = detail::uniform_count(1, std::min(constraints.max_payload, cols.size()), rng);
    for (auto idx : detail::choose(cols.size(), nc, rng)) t.payload.push_back(cols[idx]);

    assign_id(t);
    out.push_back(std::move(t));
  }
  return out;
}

namespace detail {

inline ColumnRef resolve_column(const QueryTemplate& t, std::span<const TableSchema> schemas, const std::string& name) {
  if (auto dot = name.find('.'); dot != std::string::npos) {
    ColumnRef ref{name.substr(0, dot), name.substr(dot + 1)};
    if (std::find(t.tables.begin(), t.tables.end(), ref.table) == t.tables.end())
      throw Error("column '" + name + "' is not in the template's tables");
    schema_named(schemas, ref.table).at(ref.column);
    return ref;
  }
  for (const auto& tb : t.tables)
    if (schema_named(schemas, tb).find(name)) return {tb, name};
  throw Error("column '" + name + "' is not in the template's tables");
}

}  // namespace detail

/// Structural edit of a template: join toggle, then predicate drops and adds,
/// then payload replacement. Dropping more predicates than exist leaves none.
inline QueryTemplate mutate_template(const QueryTemplate& t, const TemplateMutation& m,
                                     std::span<const TableSchema> schemas, std::uint64_t seed,
                                     double join_threshold = 0.8) {
  auto rng = make_rng(seed, "mutate", t.id);
  QueryTemplate out = t;
  out.join_fallback = false;

  if (m.toggle_join) {
    if (!out.joins.empty()) {
      const auto keep = out.tables.front();
      out.tables = {keep};
      out.joins.clear();
      std::erase_if(out.predicates, [&](const PredicateSlot& s) { return s.column.table != keep; });
      std::erase_if(out.payload, [&](const ColumnRef& c) { return c.table != keep; });
      if (out.payload.empty()) out.payload.push_back({keep, detail::schema_named(schemas, keep).columns.at(0).name});
    } else {
      auto candidates = infer_join_candidates(schemas, join_threshold);
      const auto& base = out.tables.front();
      auto it = std::find_if(candidates.begin(), candidates.end(), [&](const JoinEdge& e) {
        return (e.left.table == base) != (e.right.table == base);
      });
      if (it == candidates.end()) throw Error("no join candidate for table '" + base + "'");
      out.tables.push_back(it->left.table == base ? it->right.table : it->left.table);
      out.joins.push_back(*it);
    }
  }

  if (m.drop_predicates > 0 && !out.predicates.empty()) {
    auto drop = std::min(m.drop_predicates, out.predicates.size());
    auto victims = detail::choose(out.predicates.size(), drop, rng);
    std::vector<PredicateSlot> kept;
    for (std::size_t i = 0; i < out.predicates.size(); ++i)
      if (!std::binary_search(victims.begin(), victims.end(), i)) kept.push_back(out.predicates[i]);
    out.predicates = std::move(kept);
  }

  if (m.add_predicates > 0) {
    std::vector<PredicateSlot> unused;
    for (auto& c : detail::predicate_candidates(schemas, out.tables)) {
      bool used = std::any_of(out.predicates.begin(), out.predicates.end(),
                              [&](const PredicateSlot& s) { return s.column == c.column; });
      if (!used) unused.push_back(c);
    }
    if (unused.size() < m.add_predicates)
      throw Error("cannot add " + std::to_string(m.add_predicates) + " predicates: only " +
                  std::to_string(unused.size()) + " unused columns remain");
    for (auto idx : detail::choose(unused.size(), m.add_predicates, rng)) out.predicates.push_back(unused[idx]);
  }

  if (m.set_payload) {
    if (m.set_payload->empty()) throw Error("payload must not be empty");
    out.payload.clear();
    for (const auto& name : *m.set_payload) out.payload.push_back(detail::resolve_column(out, schemas, name));
  }

  assign_id(out);
  validate_template(out, schemas);
  return out;
}

// ---------------------------------------------------------------------------
// Features

inline constexpr std::size_t kTemplateFeatureHeader = 6;

/// Qualified column names of all schemas, in schema order.
inline std::vector<std::string> column_universe(std::span<const TableSchema> schemas) {
  std::vector<std::string> u;
  for (const auto& s : schemas)
    for (const auto& c : s.columns) u.push_back(s.table_name + "." + c.name);
  return u;
}

/// [predicates, joins, payload, tables, range predicates, equality predicates]
/// followed by a one-hot over `universe` marking predicate columns.
inline std::vector<double> template_features(const QueryTemplate& t, std::span<const std::string> universe) {
  std::vector<double> f(kTemplateFeatureHeader + universe.size(), 0.0);
  f[0] = static_cast<double>(t.predicates.size());
  f[1] = static_cast<double>(t.joins.size());
  f[2] = static_cast<double>(t.payload.size());
  f[3] = static_cast<double>(t.tables.size());
  for (const auto& s : t.predicates) {
    (s.kind == PredicateKind::kRange ? f[4] : f[5]) += 1.0;
    auto q = s.column.qualified();
    auto it = std::find(universe.begin(), universe.end(), q);
    if (it != universe.end()) f[kTemplateFeatureHeader + static_cast<std::size_t>(it - universe.begin())] = 1.0;
  }
  return f;
}

// ---------------------------------------------------------------------------
// SQL

inline std::string quote_sql_string(std::string_view v) {
  std::string out = "'";
  for (char c : v) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

/// SELECT <payload> FROM <t1> [JOIN t2 ON t1.a = t2.b ...] [WHERE c1 AND c2 ...]
/// Columns are table-qualified only when the template spans several tables.
inline std::string render_sql(const QueryTemplate& t, std::span<const Binding> bindings) {
  if (bindings.size() != t.predicates.size())
    throw Error("template " + t.id + " has " + std::to_string(t.predicates.size()) + " predicate slots but " +
                std::to_string(bindings.size()) + " bindings");
  bool qualify = t.tables.size() > 1;
  auto col = [&](const ColumnRef& c) { return qualify ? c.qualified() : c.column; };

  std::string sql = "SELECT ";
  for (std::size_t i = 0; i < t.payload.size(); ++i) {
    if (i) sql += ", ";
    sql += col(t.payload[i]);
  }
  sql += " FROM " + t.tables.front();
  std::vector<std::string> seen{t.tables.front()};
  for (const auto& j : t.joins) {
    bool has_left = std::find(seen.begin(), seen.end(), j.left.table) != seen.end();
    const auto& incoming = has_left ? j.right : j.left;
    const auto& existing = has_left ? j.left : j.right;
    sql += " JOIN " + incoming.table + " ON " + existing.qualified() + " = " + incoming.qualified();
    seen.push_back(incoming.table);
  }

  for (std::size_t i = 0; i < t.predicates.size(); ++i) {
    const auto& slot = t.predicates[i];
    sql += i == 0 ? " WHERE " : " AND ";
    sql += col(slot.column);
    if (slot.kind == PredicateKind::kRange) {
      const auto* r = std::get_if<RangeBinding>(&bindings[i]);
      if (!r) throw Error("range slot " + std::to_string(i) + " bound to a non-range value");
      if (slot.type == LogicalType::kDatetime) {
        auto fmt = slot.datetime_format == DatetimeFormat::kIsoT ? DatetimeFormat::kIsoT : DatetimeFormat::kDateTime;
        sql += " BETWEEN " + quote_sql_string(format_datetime(r->low, fmt)) + " AND " +
               quote_sql_string(format_datetime(r->high, fmt));
      } else {
        sql += " BETWEEN " + format_number(r->low) + " AND " + format_number(r->high);
      }
    } else {
      const auto* e = std::get_if<EqualityBinding>(&bindings[i]);
      if (!e) throw Error("equality slot " + std::to_string(i) + " bound to a non-equality value");
      sql += " = " + quote_sql_string(e->value);
    }
  }
  return sql;
}

/// Renders using the bindings stored on the slots; every slot must be bound.
inline std::string render_sql(const QueryTemplate& t) {
  std::vector<Binding> bindings;
  for (std::size_t i = 0; i < t.predicates.size(); ++i) {
    if (!t.predicates[i].binding) throw Error("template " + t.id + ": predicate slot " + std::to_string(i) + " is unbound");
    bindings.push_back(*t.predicates[i].binding);
  }
  return render_sql(t, bindings);
}

}  // namespace driftgen
