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

#include "tagcube/fact_store.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <set>
#include <unordered_map>

#include "tagcube/error.h"

namespace tagcube {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t";
  const auto begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kMeasure ? "MEASURE" : "DIMENSION";
}

const Column* FactTable::find(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Column& FactTable::column(std::string_view name) const {
  if (const auto* c = find(name)) return *c;
  throw Error(ErrorCode::kUnknownColumn, std::string(name));
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view bytes, char delimiter) {
  if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // Blank lines carry no record.
    if (record_has_content || record.size() > 1 || !record.front().empty()) {
      records.push_back(std::move(record));
    }
    record.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char ch = bytes[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
      record_has_content = true;
    } else if (ch == delimiter) {
      end_field();
      record_has_content = true;
    } else if (ch == '\r') {
      if (i + 1 < bytes.size() && bytes[i + 1] == '\n') ++i;
      end_record();
    } else if (ch == '\n') {
      end_record();
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kInvalidArgument, "unterminated quoted field");
  }
  if (!field.empty() || !record.empty() || record_has_content) end_record();
  return records;
}

FactTable ingest_csv(std::string_view bytes, const IngestOptions& options) {
  if (bytes.empty()) throw Error(ErrorCode::kEmptyInput, "no bytes");
  auto records = parse_csv_records(bytes, options.delimiter);
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no records");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (options.header_row) {
    names = records.front();
    first_data = 1;
  } else {
    for (std::size_t c = 0; c < records.front().size(); ++c) names.push_back("c" + std::to_string(c + 1));
  }
  if (records.size() == first_data) throw Error(ErrorCode::kEmptyInput, "no data rows");

  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error(ErrorCode::kDuplicateColumnName, n);
  }
  for (const auto& [name, kind] : options.measure_hint) {
    if (!seen.contains(name)) throw Error(ErrorCode::kUnknownColumn, "hint for " + name);
  }

  const std::size_t width = names.size();
  const std::size_t rows = records.size() - first_data;
  for (std::size_t r = first_data; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw Error(ErrorCode::kRaggedRows, "row " + std::to_string(r - first_data + 1) + ": expected " +
                                              std::to_string(width) + " fields, found " +
                                              std::to_string(records[r].size()));
    }
  }

  FactTable table;
  table.row_count = rows;
  table.columns.resize(width);
  for (std::size_t c = 0; c < width; ++c) {
    Column& col = table.columns[c];
    col.name = names[c];
    col.codes.reserve(rows);
    // Keys view the parsed records, which outlive this loop.
    std::unordered_map<std::string_view, std::uint32_t> index;
    std::vector<double> numbers;
    numbers.reserve(rows);
    bool numeric = true;
    for (std::size_t r = first_data; r < records.size(); ++r) {
      const std::string& cell = records[r][c];
      auto it = index.find(cell);
      if (it == index.end()) {
        const auto code = static_cast<std::uint32_t>(col.dictionary.size());
        col.dictionary.push_back(cell);
        it = index.emplace(std::string_view(records[r][c]), code).first;
      }
      col.codes.push_back(it->second);
      if (numeric) {
        if (auto v = parse_number(cell)) {
          numbers.push_back(*v);
        } else {
          numeric = false;
        }
      }
    }
    if (numeric) col.numbers = std::move(numbers);

    col.kind = numeric ? ColumnKind::kMeasure : ColumnKind::kDimension;
    if (auto hint = options.measure_hint.find(col.name); hint != options.measure_hint.end()) {
      col.kind = hint->second;
    }
    if (col.kind == ColumnKind::kMeasure && !numeric) {
      throw Error(ErrorCode::kNonNumericMeasure, col.name);
    }
  }
  return table;
}

const std::string& Hierarchy::parent_of(const std::string& value) const {
  auto it = mapping.find(value);
  if (it == mapping.end()) {
    throw Error(ErrorCode::kIncompleteMapping, child_dimension + " -> " + parent_name + ": " + value);
  }
  return it->second;
}

std::map<std::string, std::string> parse_hierarchy_csv(std::string_view bytes, char delimiter) {
  std::map<std::string, std::string> mapping;
  std::size_t row = 0;
  for (auto& record : parse_csv_records(bytes, delimiter)) {
    ++row;
    if (record.size() != 2) {
      throw Error(ErrorCode::kRaggedRows, "row " + std::to_string(row) + ": expected 2 fields");
    }
    auto [it, inserted] = mapping.emplace(record[0], record[1]);
    if (!inserted && it->second != record[1]) {
      throw Error(ErrorCode::kInvalidArgument, "conflicting parents for " + record[0]);
    }
  }
  return mapping;
}

bool Schema::has_dimension(std::string_view name) const {
  return std::find(dimensions.begin(), dimensions.end(), name) != dimensions.end();
}

bool Schema::has_measure(std::string_view name) const {
  return std::find(measures.begin(), measures.end(), name) != measures.end();
}

const Hierarchy* Schema::find_hierarchy(std::string_view parent) const {
  for (const auto& h : hierarchies) {
    if (h.parent_name == parent) return &h;
  }
  return nullptr;
}

Schema define_schema(const FactTable& table, const std::vector<std::string>& dims,
                     const std::vector<std::string>& measures) {
  if (dims.empty()) throw Error(ErrorCode::kEmptyDimensionSet, "at least one dimension required");
  if (measures.empty()) throw Error(ErrorCode::kEmptyMeasureSet, "at least one measure required");
  std::set<std::string> dim_set;
  for (const auto& d : dims) {
    table.column(d);
    if (!dim_set.insert(d).second) throw Error(ErrorCode::kInvalidArgument, "duplicate dimension " + d);
  }
  std::set<std::string> measure_set;
  for (const auto& m : measures) {
    const Column& col = table.column(m);
    if (dim_set.contains(m)) throw Error(ErrorCode::kOverlappingRoles, m);
    if (!col.is_numeric()) throw Error(ErrorCode::kNonNumericMeasure, m);
    if (!measure_set.insert(m).second) throw Error(ErrorCode::kInvalidArgument, "duplicate measure " + m);
  }
  return Schema{table.id, dims, measures, {}};
}

Schema attach_hierarchy(const FactTable& table, const Schema& schema, const std::string& child,
                        const std::string& parent_name, std::map<std::string, std::string> mapping) {
  if (!schema.has_dimension(child)) throw Error(ErrorCode::kUnknownDimension, child);
  if (parent_name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty parent name");
  if (parent_name != child && schema.has_dimension(parent_name)) {
    throw Error(ErrorCode::kInvalidArgument, "parent name collides with dimension " + parent_name);
  }
  const Column& col = table.column(child);
  std::string missing;
  for (const auto& value : col.dictionary) {
    if (!mapping.contains(value)) {
      if (!missing.empty()) missing += ", ";
      missing += value;
    }
  }
  if (!missing.empty()) throw Error(ErrorCode::kIncompleteMapping, missing);

  Schema result = schema;
  Hierarchy h{child, parent_name, std::move(mapping)};
  auto same = std::find_if(result.hierarchies.begin(), result.hierarchies.end(), [&](const Hierarchy& x) {
    return x.child_dimension == child && x.parent_name == parent_name;
  });
  if (same != result.hierarchies.end()) {
    *same = std::move(h);
  } else {
    result.hierarchies.push_back(std::move(h));
  }
  return result;
}

std::string DatasetRegistry::add(FactTable table) {
  std::unique_lock lock(mutex_);
  std::string id = "ds" + std::to_string(next_id_++);
  table.id = id;
  tables_.emplace(id, std::make_shared<const FactTable>(std::move(table)));
  return id;
}

std::shared_ptr<const FactTable> DatasetRegistry::get(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = tables_.find(id);
  if (it == tables_.end()) throw Error(ErrorCode::kNotFound, "dataset " + id);
  return it->second;
}

std::vector<std::string> DatasetRegistry::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, t] : tables_) out.push_back(id);
  return out;
}

}  // namespace tagcube
