// Copyright 2026 The Tagcube Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace tagcube {

enum class ColumnKind { kDimension, kMeasure };

std::string_view to_string(ColumnKind kind);

/// One column of a fact table. Every column is dictionary-encoded so it can
/// serve as a grouping key; columns whose cells all parse as finite numbers
/// additionally carry their numeric values.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kDimension;
  std::vector<std::string> dictionary;  // distinct values, first-seen order
  std::vector<std::uint32_t> codes;     // row -> index into dictionary
  std::vector<double> numbers;          // row -> value, only if is_numeric

  bool is_numeric() const { return numbers.size() == codes.size(); }
  const std::string& cell(std::size_t row) const { return dictionary[codes[row]]; }
};

/// Immutable columnar store. Shared between cuboids and icebergs through
/// `std::shared_ptr<const FactTable>`; nothing mutates it after ingest.
struct FactTable {
  std::string id;
  std::vector<Column> columns;
  std::size_t row_count = 0;

  const Column* find(std::string_view name) const;
  /// Throws UnknownColumn.
  const Column& column(std::string_view name) const;
};

struct IngestOptions {
  char delimiter = ',';
  bool header_row = true;
  /// Per-column kind override, keyed by column name.
  std::map<std::string, ColumnKind> measure_hint;
};

/// Parses RFC-4180 delimited text. Throws EmptyInput, RaggedRows (with the
/// 1-based data row index), DuplicateColumnName, or NonNumericMeasure when a
/// hint forces a column with non-numeric or missing cells to MEASURE.
FactTable ingest_csv(std::string_view bytes, const IngestOptions& options = {});

/// Raw RFC-4180 record splitter shared by table and hierarchy ingest.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view bytes, char delimiter);

struct Hierarchy {
  std::string child_dimension;
  std::string parent_name;
  std::map<std::string, std::string> mapping;

  /// Throws IncompleteMapping if `value` has no image.
  const std::string& parent_of(const std::string& value) const;

  friend bool operator==(const Hierarchy&, const Hierarchy&) = default;
};

/// Reads a 2-column child,parent CSV (no header). Conflicting duplicate
/// children throw InvalidArgument.
std::map<std::string, std::string> parse_hierarchy_csv(std::string_view bytes, char delimiter = ',');

struct Schema {
  std::string dataset;
  std::vector<std::string> dimensions;
  std::vector<std::string> measures;
  std::vector<Hierarchy> hierarchies;

  bool has_dimension(std::string_view name) const;
  bool has_measure(std::string_view name) const;
  /// Hierarchy whose parent level is named `parent_name`, if any.
  const Hierarchy* find_hierarchy(std::string_view parent_name) const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

/// Throws UnknownColumn, OverlappingRoles, EmptyDimensionSet,
/// EmptyMeasureSet, NonNumericMeasure.
Schema define_schema(const FactTable& table, const std::vector<std::string>& dims,
                     const std::vector<std::string>& measures);

/// Returns a copy of `schema` with the hierarchy appended, replacing any
/// earlier hierarchy with the same child and parent name. The mapping must
/// cover every distinct value of the child column.
Schema attach_hierarchy(const FactTable& table, const Schema& schema, const std::string& child,
                        const std::string& parent_name,
                        std::map<std::string, std::string> mapping);

/// Thread-safe id -> table map. Ids are assigned sequentially and never
/// reused; identical uploads get distinct ids.
class DatasetRegistry {
 public:
  std::string add(FactTable table);
  /// Throws NotFound.
  std::shared_ptr<const FactTable> get(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const FactTable>> tables_;
  std::uint64_t next_id_ = 1;
};

}  // namespace tagcube
