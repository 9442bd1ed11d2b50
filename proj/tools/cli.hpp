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

// Command-line front end: subcommands that wire profiling, data drift,
// template/workload generation and verification from one JSON scenario
// config, writing <out>/data, <out>/workload, <out>/reports and a manifest
// of SHA-256 digests for every file written.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "driftgen/driftgen.hpp"

namespace driftgen::cli {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("file not found: " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Files written by one invocation, relative to the output root.
class OutputTree {
 public:
  explicit OutputTree(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& rel, std::string_view content) {
    auto path = root_ / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path.string());
    digests_[rel] = sha256_hex(content);
  }

  const std::map<std::string, std::string>& digests() const { return digests_; }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::map<std::string, std::string> digests_;
};

/// Everything one invocation needs: config, effective seed, output tree.
struct Context {
  Json config = Json::object();
  fs::path base_dir = ".";
  std::uint64_t seed = 0;
  OutputTree tree{"out"};
  std::map<std::string, std::uint64_t> step_seeds;

  /// Named substream of the master seed, recorded in the manifest.
  std::uint64_t step_seed(const std::string& name) {
    auto s = substream(seed, name);
    step_seeds[name] = s;
    return s;
  }

  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }

  const Json* section(const char* key) const {
    if (!config.contains(key) || config.at(key).is_null()) return nullptr;
    return &config.at(key);
  }

  std::size_t bucket_count() const {
    const auto* o = section("schema_options");
    return o ? detail::value_or<std::size_t>(*o, "bucket_count", kDefaultBucketCount) : kDefaultBucketCount;
  }
  std::size_t top_k() const {
    const auto* o = section("schema_options");
    return o ? detail::value_or<std::size_t>(*o, "top_k", kDefaultTopK) : kDefaultTopK;
  }
  DriftThresholds thresholds() const {
    const auto* t = section("thresholds");
    return t ? thresholds_from_json(*t) : DriftThresholds{};
  }
};

// ---------------------------------------------------------------------------
// Config plumbing

inline SourceDescriptor source_from_json(const Json& j, const Context& ctx) {
  return detail::guarded("source", [&] {
    SourceDescriptor d;
    d.kind = source_kind_from_string(detail::value_or<std::string>(j, "kind", "csv"));
    d.location = ctx.resolve(j.at("location").get<std::string>()).string();
    if (j.contains("options"))
      for (const auto& [k, v] : j.at("options").items())
        d.options[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return d;
  });
}

inline std::vector<SourceDescriptor> sources(const Context& ctx) {
  std::vector<SourceDescriptor> out;
  if (const auto* s = ctx.section("sources"))
    for (const auto& j : *s) out.push_back(source_from_json(j, ctx));
  if (const auto* s = ctx.section("source")) out.push_back(source_from_json(*s, ctx));
  if (out.empty()) throw Error("config error: no source configured");
  return out;
}

inline std::map<std::string, std::string> csv_options(const Context& ctx) {
  std::map<std::string, std::string> opts;
  auto descs = sources(ctx);
  for (const auto& [k, v] : descs.front().options)
    if (k != "name" && k != "header") opts[k] = v;
  return opts;
}

struct Dataset {
  std::vector<Table> tables;
  std::vector<TableSchema> schemas;
};

inline Dataset load_dataset(Context& ctx) {
  Dataset d;
  for (const auto& desc : sources(ctx)) {
    d.tables.push_back(open_source(desc));
    d.schemas.push_back(extract_schema(d.tables.back(), ctx.bucket_count(), ctx.top_k()));
  }
  return d;
}

inline std::size_t table_index(const Dataset& d, const Context& ctx, const char* key) {
  std::string name = d.tables.front().name();
  if (const auto* n = ctx.section(key)) name = n->get<std::string>();
  for (std::size_t i = 0; i < d.tables.size(); ++i)
    if (d.tables[i].name() == name) return i;
  throw Error("config error: " + std::string(key) + " names unknown table '" + name + "'");
}

// ---------------------------------------------------------------------------
// Steps

inline void step_profile(Context& ctx, const Dataset& d) {
  for (const auto& s : d.schemas) ctx.tree.write("data/" + s.table_name + ".schema.json", dump_json(to_json(s)));
}

struct DriftResult {
  Table table;
  TableSchema schema;
  std::size_t index = 0;
};

inline DriftResult step_drift_data(Context& ctx, const Dataset& d) {
  const auto* list = ctx.section("data_drift");
  if (!list || !list->is_array() || list->empty()) throw Error("config error: data_drift is empty");
  auto defaults = ctx.thresholds();
  std::vector<DriftSpec> specs;
  for (std::size_t i = 0; i < list->size(); ++i) {
    try {
      specs.push_back(drift_spec_from_json(list->at(i), defaults));
    } catch (const Error& e) {
      throw Error("config error: data_drift[" + std::to_string(i) + "]: " + e.what());
    }
  }
  auto idx = table_index(d, ctx, "drift_table");
  const auto& table = d.tables[idx];
  const auto& schema = d.schemas[idx];
  auto res = apply_drift(table, schema, specs, ctx.step_seed("drift-data"));
  auto refreshed = extract_schema(res.table, schema, ctx.bucket_count(), ctx.top_k());
  const auto& name = table.name();

  ctx.tree.write("data/" + name + ".drifted.csv", render_csv(res.table, CsvOptions::from_map(csv_options(ctx))));
  ctx.tree.write("data/" + name + ".drifted.schema.json", dump_json(to_json(refreshed)));
  Json logs = Json::array();
  for (const auto& l : res.logs) logs.push_back(to_json(l));
  ctx.tree.write("data/" + name + ".changelog.json", dump_json(Json{{"logs", logs}, {"warnings", res.warnings}}));

  const auto& last = specs.back().thresholds;
  Json report;
  report["table"] = name;
  report["rows_before"] = table.row_count();
  report["rows_after"] = res.table.row_count();
  report["cardinality"] = to_json(check_cardinality_drift(table.row_count(), res.table.row_count(), last.alpha));
  report["distributional_global"] = to_json(check_distributional_drift(table, res.table, schema, last.epsilon));
  report["distributional_local"] = to_json(check_local_drift(table, res.table, schema));
  ctx.tree.write("reports/data_drift.json", dump_json(report));
  return {std::move(res.table), std::move(refreshed), idx};
}

inline void step_gen_data(Context& ctx, const Dataset& d) {
  const auto* g = ctx.section("generate");
  auto seed = ctx.step_seed("gen-data");
  for (const auto& s : d.schemas) {
    std::size_t rows = g ? detail::value_or<std::size_t>(*g, "rows", s.row_count) : s.row_count;
    auto t = generate_rows(s, rows, seed);
    ctx.tree.write("data/" + s.table_name + ".synthetic.csv", render_csv(t, CsvOptions::from_map(csv_options(ctx))));
  }
}

inline std::vector<QueryTemplate> step_gen_templates(Context& ctx, const Dataset& d) {
  Json cfg = ctx.section("templates") ? *ctx.section("templates") : Json::object();
  std::vector<QueryTemplate> templates;
  if (cfg.contains("file")) {
    templates = templates_from_json(parse_json(read_file(ctx.resolve(cfg.at("file").get<std::string>())), "templates"));
    for (const auto& t : templates) validate_template(t, d.schemas);
  } else {
    auto count = detail::value_or<std::size_t>(cfg, "count", 1);
    templates = generate_templates(d.schemas, constraints_from_json(cfg), count, ctx.step_seed("templates"));
  }
  if (templates.empty()) throw Error("config error: no templates");
  ctx.tree.write("workload/templates.json", dump_json(to_json(std::span<const QueryTemplate>(templates))));
  return templates;
}

struct Phase {
  std::string name;
  Workload instances;
};

/// Range width used when a phase names none: a fraction of the column span.
inline double default_range_width(const ColumnProfile& p, double fraction) {
  double span = p.max.value_or(0.0) - p.min.value_or(0.0);
  return span > 0.0 ? fraction * span : 1.0;
}

inline std::vector<Phase> build_phases(Context& ctx, const Dataset& d, const std::vector<QueryTemplate>& templates) {
  const auto* phases = ctx.section("workload_phases");
  if (!phases || !phases->is_array() || phases->empty()) throw Error("config error: workload_phases is empty");
  std::vector<Phase> out;
  std::int64_t next_group = 0;
  double offset = 0.0;
  double base_epoch = detail::value_or(ctx.config, "base_epoch", 0.0);

  for (std::size_t p = 0; p < phases->size(); ++p) {
    const auto& pj = phases->at(p);
    Phase phase;
    phase.name = detail::value_or<std::string>(pj, "name", "phase" + std::to_string(p));
    try {
      auto n = pj.at("n").get<std::size_t>();
      std::map<std::string, ParamSamplerSpec> specs;
      if (pj.contains("samplers"))
        for (const auto& [col, sj] : pj.at("samplers").items()) specs[col] = sampler_spec_from_json(sj);
      ParamSamplerSpec fallback = pj.contains("default_sampler") ? sampler_spec_from_json(pj.at("default_sampler"))
                                                                 : ParamSamplerSpec{};
      double width_fraction = detail::value_or(pj, "default_width_fraction", 0.1);
      std::optional<WidthSchedule> schedule;
      std::string schedule_column;
      if (pj.contains("width_schedule")) {
        const auto& ws = pj.at("width_schedule");
        schedule = WidthSchedule{ws.at("start").get<double>(), ws.at("end").get<double>(),
                                 ws.at("groups").get<std::size_t>()};
        schedule_column = ws.at("column").get<std::string>();
      }
      std::size_t groups = schedule ? schedule->groups : 1;

      auto phase_seed = ctx.step_seed("workload/" + std::to_string(p));
      for (std::size_t k = 0; k < templates.size(); ++k) {
        const auto& t = templates[k];
        std::size_t share = n / templates.size() + (k < n % templates.size() ? 1 : 0);
        if (share == 0) continue;
        auto samplers = make_slot_samplers(t, d.schemas, specs, fallback);
        std::vector<double> widths;
        std::optional<std::size_t> slot;
        for (std::size_t i = 0; i < t.predicates.size(); ++i) {
          const auto& s = t.predicates[i];
          const auto& prof = detail::schema_named(d.schemas, s.column.table).at(s.column.column);
          double w = 0.0;
          if (s.kind == PredicateKind::kRange) {
            w = default_range_width(prof, width_fraction);
            if (pj.contains("widths")) {
              const auto& wj = pj.at("widths");
              if (wj.contains(s.column.column)) w = wj.at(s.column.column).get<double>();
              if (wj.contains(s.column.qualified())) w = wj.at(s.column.qualified()).get<double>();
            }
            if (schedule && !slot && (s.column.column == schedule_column || s.column.qualified() == schedule_column))
              slot = i;
          }
          widths.push_back(w);
        }
        auto tseed = substream(phase_seed, "template", k);
        Workload part;
        if (schedule && slot) {
          if (share % groups != 0 && share < groups)
            throw Error("phase " + phase.name + " has fewer queries than schedule groups");
          part = vary_selectivity(t, samplers, widths, *slot, *schedule, share / groups, tseed, next_group);
        } else {
          for (std::size_t g = 0; g < groups; ++g) {
            auto piece = instantiate(t, samplers, widths, share / groups + (g < share % groups ? 1 : 0), tseed,
                                     next_group + static_cast<std::int64_t>(g));
            part.insert(part.end(), piece.begin(), piece.end());
          }
        }
        phase.instances.insert(phase.instances.end(), part.begin(), part.end());
      }

      // interleave templates in arrival order, then stamp arrival times
      auto rng = make_rng(phase_seed, "interleave");
      std::stable_sort(phase.instances.begin(), phase.instances.end(),
                       [](const auto& a, const auto& b) { return a.group_id < b.group_id; });
      std::vector<std::size_t> perm(phase.instances.size());
      std::iota(perm.begin(), perm.end(), 0);
      if (!schedule) std::shuffle(perm.begin(), perm.end(), rng);
      Workload ordered;
      for (auto i : perm) ordered.push_back(std::move(phase.instances[i]));
      TemporalPattern pattern =
          pj.contains("temporal") ? temporal_pattern_from_json(pj.at("temporal")) : TemporalPattern{};
      auto ts = gen_timestamps(pattern, ordered.size(), substream(phase_seed, "timestamps"));
      phase.instances = attach(std::move(ordered), ts, base_epoch + offset);
      offset += pattern.window_seconds;
      next_group += static_cast<std::int64_t>(groups);
    } catch (const Json::exception& e) {
      throw Error("config error: workload_phases[" + std::to_string(p) + "]: " + e.what());
    } catch (const Error& e) {
      throw Error("workload_phases[" + std::to_string(p) + "]: " + e.what());
    }
    out.push_back(std::move(phase));
  }
  return out;
}

inline Workload step_gen_workload(Context& ctx, const Dataset& d, const std::vector<QueryTemplate>& templates) {
  auto phases = build_phases(ctx, d, templates);
  Workload all;
  for (const auto& p : phases) all.insert(all.end(), p.instances.begin(), p.instances.end());

  std::string sql;
  for (const auto& q : all) sql += q.sql + "\n";
  ctx.tree.write("workload/workload.sql", sql);
  ctx.tree.write("workload/workload.json", dump_json(workload_sidecar(templates, all)));

  auto idx = index_templates(templates);
  ScanOracle oracle(d.tables, d.schemas);
  Json drift = Json::array();
  for (std::size_t p = 0; p + 1 < phases.size(); ++p) {
    Json entry;
    entry["from"] = phases[p].name;
    entry["to"] = phases[p + 1].name;
    entry["report"] = to_json(
        verify_workload_drift(phases[p].instances, phases[p + 1].instances, idx, oracle, ctx.thresholds()));
    drift.push_back(std::move(entry));
  }
  ctx.tree.write("reports/workload_drift.json", dump_json(drift));
  ctx.tree.write("reports/selectivity.json", dump_json(to_json(selectivity_report(all, idx, oracle))));
  return all;
}

inline void step_gen_timestamps(Context& ctx) {
  const auto* ts = ctx.section("timestamps");
  if (!ts) throw Error("config error: timestamps section missing");
  auto n = detail::guarded("timestamps", [&] { return ts->at("n").get<std::size_t>(); });
  auto pattern = temporal_pattern_from_json(ts->contains("pattern") ? ts->at("pattern") : Json::object());
  auto values = gen_timestamps(pattern, n, ctx.step_seed("timestamps"));
  std::string out = "index,offset_seconds\n";
  for (std::size_t i = 0; i < values.size(); ++i) out += std::to_string(i) + "," + format_fixed(values[i], 3) + "\n";
  ctx.tree.write("workload/timestamps.csv", out);
}

/// Per-query Q-error of the histogram estimator against the full-scan truth.
inline std::string qerror_csv(const std::vector<Table>& tables, const std::vector<TableSchema>& truth_schemas,
                              const std::vector<TableSchema>& estimator_schemas, const WorkloadFile& w) {
  auto idx = index_templates(w.templates);
  ScanOracle oracle(tables, truth_schemas);
  std::string out = "query_id,group_id,estimate,truth,q_error\n";
  for (std::size_t i = 0; i < w.instances.size(); ++i) {
    const auto& q = w.instances[i];
    const auto& t = template_for(idx, q);
    double truth = oracle.cardinality(t, q);
    double est = histogram_estimate(estimator_schemas, t, q);
    out += std::to_string(i) + "," + std::to_string(q.group_id) + "," + format_number(est) + "," +
           format_number(truth) + "," + format_number(q_error(est, truth)) + "\n";
  }
  return out;
}

inline void write_manifest(Context& ctx) {
  Json m;
  m["tool_version"] = kToolVersion;
  m["config_digest"] = sha256_hex(ctx.config.dump());
  m["seed"] = ctx.seed;
  Json seeds = Json::object();
  for (const auto& [k, v] : ctx.step_seeds) seeds[k] = v;
  m["per_step_seeds"] = std::move(seeds);
  Json files = Json::array();
  for (const auto& [path, digest] : ctx.tree.digests()) files.push_back(Json{{"path", path}, {"sha256", digest}});
  m["output_files"] = std::move(files);
  auto text = dump_json(m);
  fs::create_directories(ctx.tree.root());
  std::ofstream(ctx.tree.root() / "manifest.json", std::ios::binary | std::ios::trunc) << text;
}

// ---------------------------------------------------------------------------
// Entry point

/// Runs one command line; returns the process exit code. Drift verdicts never
/// affect the exit code; configuration and input errors return 2.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Generate and verify data and workload drift for tabular benchmarks", "driftgen"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Scenario config (JSON)");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  std::vector<std::string> inputs, verify_data, verify_workloads, qerror_schemas;
  std::string qerror_workload;
  auto* profile = app.add_subcommand("profile", "Profile the source table(s) into schema JSON");
  profile->add_option("--input", inputs, "CSV file(s) to profile instead of the configured source");
  auto* drift = app.add_subcommand("drift-data", "Apply the configured data drift and report it");
  auto* gen_data = app.add_subcommand("gen-data", "Synthesize rows from the source profile");
  auto* gen_templates = app.add_subcommand("gen-templates", "Generate query templates");
  auto* gen_workload = app.add_subcommand("gen-workload", "Generate templates and the phased workload");
  auto* gen_ts = app.add_subcommand("gen-timestamps", "Generate arrival timestamps");
  auto* verify = app.add_subcommand("verify", "Measure drift between two datasets or two workloads");
  verify->add_option("--data", verify_data, "Reference and candidate CSV")->expected(2);
  verify->add_option("--workloads", verify_workloads, "Two workload sidecars (truth from the configured source)")
      ->expected(2);
  auto* qerror = app.add_subcommand("qerror", "Histogram-estimator Q-error per query");
  qerror->add_option("--data", inputs, "CSV file(s) holding the data (default: configured source)");
  qerror->add_option("--workload", qerror_workload, "Workload sidecar JSON")->required();
  qerror->add_option("--schema", qerror_schemas, "Schema JSON for the estimator (default: profile the data)");
  auto* run_all = app.add_subcommand("run", "Full scenario: profile, drift, templates, workload, q-error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Context ctx;
    if (!config_path.empty()) {
      ctx.config = parse_json(read_file(config_path), "config");
      if (!ctx.config.is_object()) throw Error("config error: top level must be an object");
      ctx.base_dir = fs::path(config_path).parent_path();
      if (ctx.base_dir.empty()) ctx.base_dir = ".";
    }
    ctx.seed = seed ? *seed : detail::value_or<std::uint64_t>(ctx.config, "seed", 0);
    ctx.config["seed"] = ctx.seed;
    ctx.tree = OutputTree(out_dir);

    auto with_inputs = [&] {
      if (inputs.empty()) return;
      Json list = Json::array();
      for (const auto& i : inputs) list.push_back(Json{{"kind", "csv"}, {"location", fs::absolute(i).string()}});
      ctx.config.erase("source");
      ctx.config["sources"] = list;
    };

    if (profile->parsed()) {
      with_inputs();
      step_profile(ctx, load_dataset(ctx));
    } else if (drift->parsed()) {
      step_drift_data(ctx, load_dataset(ctx));
    } else if (gen_data->parsed()) {
      step_gen_data(ctx, load_dataset(ctx));
    } else if (gen_templates->parsed()) {
      step_gen_templates(ctx, load_dataset(ctx));
    } else if (gen_workload->parsed()) {
      auto d = load_dataset(ctx);
      step_gen_workload(ctx, d, step_gen_templates(ctx, d));
    } else if (gen_ts->parsed()) {
      step_gen_timestamps(ctx);
    } else if (verify->parsed()) {
      Json report = Json::object();
      auto th = ctx.thresholds();
      if (!verify_data.empty()) {
        auto a = open_source({SourceKind::kCsv, verify_data[0], {}});
        auto b = open_source({SourceKind::kCsv, verify_data[1], {{"name", a.name()}}});
        auto s = extract_schema(a, ctx.bucket_count(), ctx.top_k());
        report["cardinality"] = to_json(check_cardinality_drift(a.row_count(), b.row_count(), th.alpha));
        report["distributional_global"] = to_json(check_distributional_drift(a, b, s, th.epsilon));
        report["distributional_local"] = to_json(check_local_drift(a, b, s));
      }
      if (!verify_workloads.empty()) {
        auto d = load_dataset(ctx);
        auto w1 = workload_from_json(parse_json(read_file(verify_workloads[0]), "workload"));
        auto w2 = workload_from_json(parse_json(read_file(verify_workloads[1]), "workload"));
        auto templates = w1.templates;
        for (const auto& t : w2.templates)
          if (std::none_of(templates.begin(), templates.end(), [&](auto& x) { return x.id == t.id; }))
            templates.push_back(t);
        ScanOracle oracle(d.tables, d.schemas);
        report["workload"] = to_json(verify_workload_drift(w1.instances, w2.instances, index_templates(templates),
                                                           oracle, th));
      }
      if (report.empty()) throw Error("verify needs --data or --workloads");
      ctx.tree.write("reports/verify.json", dump_json(report));
    } else if (qerror->parsed()) {
      with_inputs();
      auto d = load_dataset(ctx);
      auto w = workload_from_json(parse_json(read_file(qerror_workload), "workload"));
      std::vector<TableSchema> est = d.schemas;
      if (!qerror_schemas.empty()) {
        est.clear();
        for (const auto& s : qerror_schemas) est.push_back(schema_from_json(parse_json(read_file(s), "schema")));
      }
      ctx.tree.write("reports/qerror.csv", qerror_csv(d.tables, d.schemas, est, w));
    } else if (run_all->parsed()) {
      auto d = load_dataset(ctx);
      step_profile(ctx, d);
      Dataset final_data = d;
      if (ctx.section("data_drift")) {
        auto res = step_drift_data(ctx, d);
        final_data.tables[res.index] = std::move(res.table);
        final_data.schemas[res.index] = std::move(res.schema);
      }
      if (ctx.section("generate")) step_gen_data(ctx, d);
      if (ctx.section("timestamps")) step_gen_timestamps(ctx);
      if (ctx.section("workload_phases")) {
        auto templates = step_gen_templates(ctx, d);
        auto workload = step_gen_workload(ctx, d, templates);
        WorkloadFile wf{templates, workload};
        ctx.tree.write("reports/qerror.csv", qerror_csv(final_data.tables, final_data.schemas, final_data.schemas, wf));
        if (ctx.section("data_drift"))
          ctx.tree.write("reports/qerror_stale.csv", qerror_csv(final_data.tables, final_data.schemas, d.schemas, wf));
      }
    }
    write_manifest(ctx);
    for (const auto& [path, digest] : ctx.tree.digests()) out << digest.substr(0, 12) << "  " << path << "\n";
    return 0;
  } catch (const NotImplemented& e) {
    err << "error: not implemented: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace driftgen::cli
