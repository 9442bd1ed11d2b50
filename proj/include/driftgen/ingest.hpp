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

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/table.hpp"

namespace driftgen {

enum class SourceKind { kCsv, kRelationalStub };

inline std::string to_string(SourceKind k) { return k == SourceKind::kCsv ? "csv" : "relational-stub"; }

inline SourceKind source_kind_from_string(std::string_view s) {
  if (s == "csv") return SourceKind::kCsv;
  if (s == "relational-stub" || s == "relational") return SourceKind::kRelationalStub;
  throw Error("unknown source kind '" + std::string(s) + "'");
}

/// Where a table comes from. Recognised options: "delimiter" (one character,
/// default ","), "header" ("true"/"false", default true), "null" (default ""),
/// "name" (table name, default the file stem).
struct SourceDescriptor {
  SourceKind kind = SourceKind::kCsv;
  std::string location;
  std::map<std::string, std::string> options;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  std::string null_token;

  static CsvOptions from_map(const std::map<std::string, std::string>& options) {
    CsvOptions o;
    if (auto it = options.find("delimiter"); it != options.end()) {
      if (it->second == "\\t" || it->second == "tab") {
        o.delimiter = '\t';
      } else if (it->second.size() == 1) {
        o.delimiter = it->second[0];
      } else {
        throw Error("csv delimiter must be a single character, got '" + it->second + "'");
      }
      if (o.delimiter == '"' || o.delimiter == '\n' || o.delimiter == '\r') throw Error("invalid csv delimiter");
    }
    if (auto it = options.find("header"); it != options.end()) {
      if (it->second == "true" || it->second == "1") {
        o.header = true;
      } else if (it->second == "false" || it->second == "0") {
        o.header = false;
      } else {
        throw Error("csv header flag must be true or false, got '" + it->second + "'");
      }
    }
    if (auto it = options.find("null"); it != options.end()) o.null_token = it->second;
    return o;
  }
};

namespace csv {

struct Field {
  std::string text;
  bool quoted = false;
};

/// Splits RFC-4180 text into records. Quoted fields may span lines; "" inside
/// quotes is a literal quote. Records are numbered from 1 in `line_of_record`.
inline std::vector<std::vector<Field>> parse_records(std::string_view data, char delimiter) {
  std::vector<std::vector<Field>> records;
  std::vector<Field> record;
  Field field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  std::size_t record_no = 1;

  auto end_field = [&]() {
    record.push_back(std::move(field));
    field = Field{};
    field_started = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    ++record_no;
  };

  while (i < data.size()) {
    char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.text.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        if (i < data.size() && data[i] != delimiter && data[i] != '\n' && data[i] != '\r')
          throw Error("malformed csv: unexpected character after closing quote in record " + std::to_string(record_no));
        continue;
      }
      field.text.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && !field_started && field.text.empty()) {
      in_quotes = true;
      field.quoted = true;
      field_started = true;
      ++i;
      continue;
    }
    if (c == delimiter) {
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      ++i;
      continue;
    }
    field.text.push_back(c);
    field_started = true;
    ++i;
  }
  if (in_quotes) throw Error("malformed csv: unterminated quoted field in record " + std::to_string(record_no));
  if (field_started || !record.empty()) end_record();
  return records;
}

inline bool needs_quoting(std::string_view v, char delimiter, std::string_view null_token) {
  if (v == null_token) return true;
  if (!v.empty() && (v.front() == ' ' || v.back() == ' ')) return true;
  for (char c : v)
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') return true;
  return false;
}

inline void write_field(std::string& out, std::string_view v, char delimiter, std::string_view null_token) {
  if (!needs_quoting(v, delimiter, null_token)) {
    out.append(v);
    return;
  }
  out.push_back('"');
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace csv

/// Parses CSV text into a Table of raw strings. An unquoted field equal to the
/// null token is null; a quoted field is always a value.
inline Table parse_csv(std::string_view data, const CsvOptions& opts, std::string table_name) {
  auto records = csv::parse_records(data, opts.delimiter);
  std::vector<std::string> names;
  std::size_t first = 0;
  if (opts.header) {
    if (records.empty()) throw Error("csv has no header row");
    for (auto& f : records[0]) names.push_back(f.text);
    first = 1;
  } else {
    if (records.empty()) return Table(std::move(table_name));
    for (std::size_t c = 0; c < records[0].size(); ++c) names.push_back("col" + std::to_string(c));
  }

  std::vector<Column> columns(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    columns[c].name = names[c];
    columns[c].values.reserve(records.size() - first);
  }
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    std::size_t row_no = r - first + 1;
    if (rec.size() != names.size())
      throw Error("malformed csv: row " + std::to_string(row_no) + " has " + std::to_string(rec.size()) +
                  " fields, expected " + std::to_string(names.size()));
    for (std::size_t c = 0; c < rec.size(); ++c) {
      if (!rec[c].quoted && rec[c].text == opts.null_token)
        columns[c].values.emplace_back(std::nullopt);
      else
        columns[c].values.emplace_back(rec[c].text);
    }
  }
  return Table(std::move(table_name), std::move(columns));
}

/// Byte-deterministic CSV rendering with a header row.
inline std::string render_csv(const Table& table, const CsvOptions& opts = {}) {
  std::string out;
  const auto& cols = table.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out.push_back(opts.delimiter);
    csv::write_field(out, cols[c].name, opts.delimiter, "\x01");
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out.push_back(opts.delimiter);
      const auto& cell = cols[c].values[r];
      if (cell)
        csv::write_field(out, *cell, opts.delimiter, opts.null_token);
      else
        out.append(opts.null_token);
    }
    out.push_back('\n');
  }
  return out;
}

/// Extension seam for tabular sources.
class Source {
 public:
  virtual ~Source() = default;
  virtual Table read() const = 0;
};

class CsvSource final : public Source {
 public:
  explicit CsvSource(SourceDescriptor desc) : desc_(std::move(desc)), opts_(CsvOptions::from_map(desc_.options)) {}

  Table read() const override {
    std::ifstream in(desc_.location, std::ios::binary);
    if (!in) throw Error("file not found: " + desc_.location);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name;
    if (auto it = desc_.options.find("name"); it != desc_.options.end())
      name = it->second;
    else
      name = std::filesystem::path(desc_.location).stem().string();
    try {
      return parse_csv(buf.str(), opts_, std::move(name));
    } catch (const Error& e) {
      throw Error(desc_.location + ": " + e.what());
    }
  }

 private:
  SourceDescriptor desc_;
  CsvOptions opts_;
};

/// Declared so configs naming a relational source parse; reading is not supported.
class RelationalSource final : public Source {
 public:
  explicit RelationalSource(SourceDescriptor desc) : desc_(std::move(desc)) {}
  Table read() const override {
    throw NotImplemented("relational sources are not implemented (connection '" + desc_.location + "')");
  }

 private:
  SourceDescriptor desc_;
};

inline std::unique_ptr<Source> make_source(const SourceDescriptor& desc) {
  switch (desc.kind) {
    case SourceKind::kCsv: return std::make_unique<CsvSource>(desc);
    case SourceKind::kRelationalStub: return std::make_unique<RelationalSource>(desc);
  }
  throw Error("unknown source kind");
}

inline Table open_source(const SourceDescriptor& desc) { return make_source(desc)->read(); }

inline void write_table(const Table& table, const std::filesystem::path& path,
                        const std::map<std::string, std::string>& options = {}) {
  auto opts = CsvOptions::from_map(options);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  auto text = render_csv(table, opts);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace driftgen
