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
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "driftgen/common.hpp"

namespace driftgen {

/// A cell is either null or its raw text. Typing happens during profiling.
using Cell = std::optional<std::string>;

struct Column {
  std::string name;
  std::vector<Cell> values;

  bool operator==(const Column&) const = default;
};

/// In-memory columnar dataset version. Every column holds exactly row_count()
/// cells and column names are unique.
class Table {
 public:
  Table() = default;
  explicit Table(std::string name) : name_(std::move(name)) {}

  Table(std::string name, std::vector<Column> columns) : name_(std::move(name)) {
    for (auto& c : columns) add_column(std::move(c));
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t row_count() const { return columns_.empty() ? rows_without_columns_ : columns_.front().values.size(); }
  std::size_t column_count() const { return columns_.size(); }

  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }

  std::optional<std::size_t> find_column(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i].name == name) return i;
    return std::nullopt;
  }

  const Column& column(std::string_view name) const {
    auto idx = find_column(name);
    if (!idx) throw Error("table '" + name_ + "' has no column '" + std::string(name) + "'");
    return columns_[*idx];
  }

  void add_column(Column c) {
    if (find_column(c.name)) throw Error("duplicate column name '" + c.name + "' in table '" + name_ + "'");
    if (!columns_.empty() && c.values.size() != row_count())
      throw Error("column '" + c.name + "' has " + std::to_string(c.values.size()) + " values, table has " +
                  std::to_string(row_count()) + " rows");
    columns_.push_back(std::move(c));
  }

  /// Replaces the values of an existing column; the length must not change.
  void replace_values(std::string_view name, std::vector<Cell> values) {
    auto idx = find_column(name);
    if (!idx) throw Error("table '" + name_ + "' has no column '" + std::string(name) + "'");
    if (values.size() != row_count()) throw Error("replacement for column '" + std::string(name) + "' changes row count");
    columns_[*idx].values = std::move(values);
  }

  /// Rows of `other` are appended in order; column names must match positionally.
  void append_rows(const Table& other) {
    if (other.column_count() != column_count()) throw Error("append_rows: column count mismatch");
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (columns_[c].name != other.columns_[c].name) throw Error("append_rows: column name mismatch at " + std::to_string(c));
      auto& dst = columns_[c].values;
      const auto& src = other.columns_[c].values;
      dst.insert(dst.end(), src.begin(), src.end());
    }
  }

  /// New table holding the given rows (indices may repeat), in the given order.
  Table select_rows(const std::vector<std::size_t>& rows) const {
    Table out(name_);
    for (const auto& c : columns_) {
      Column nc{c.name, {}};
      nc.values.reserve(rows.size());
      for (auto r : rows) nc.values.push_back(c.values.at(r));
      out.columns_.push_back(std::move(nc));
    }
    if (columns_.empty()) out.rows_without_columns_ = rows.size();
    return out;
  }

  std::vector<std::string> column_names() const {
    std::vector<std::string> names;
    names.reserve(columns_.size());
    for (const auto& c : columns_) names.push_back(c.name);
    return names;
  }

  bool operator==(const Table& other) const {
    return name_ == other.name_ && columns_ == other.columns_ && row_count() == other.row_count();
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::size_t rows_without_columns_ = 0;
};

}  // namespace driftgen
