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

#include "tagcube/cube.h"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "tagcube/error.h"

namespace tagcube {

namespace {

constexpr std::int64_t kUnmapped = -1;

// Base dictionary code -> level value id, or kUnmapped when the hierarchy
// chain has no image for that value.
struct LevelIndex {
  const Column* column = nullptr;
  std::vector<std::int64_t> code_to_value;
  std::vector<std::string> values;
};

LevelIndex index_level(const FactTable& table, const Level& level) {
  LevelIndex idx;
  idx.column = &table.column(level.column);
  std::map<std::string, std::int64_t> ids;
  idx.code_to_value.reserve(idx.column->dictionary.size());
  for (const auto& base : idx.column->dictionary) {
    const std::string* v = &base;
    bool mapped = true;
    for (const auto& h : level.chain) {
      auto it = h.mapping.find(*v);
      if (it == h.mapping.end()) {
        mapped = false;
        break;
      }
      v = &it->second;
    }
    if (!mapped) {
      idx.code_to_value.push_back(kUnmapped);
      continue;
    }
    auto [it, inserted] = ids.emplace(*v, static_cast<std::int64_t>(idx.values.size()));
    if (inserted) idx.values.push_back(*v);
    idx.code_to_value.push_back(it->second);
  }
  return idx;
}

std::vector<char> filter_mask(const FactTable& table, const LevelFilter& filter) {
  const LevelIndex idx = index_level(table, filter.level);
  std::vector<char> pass(idx.code_to_value.size(), 0);
  for (std::size_t code = 0; code < pass.size(); ++code) {
    const auto v = idx.code_to_value[code];
    pass[code] = v != kUnmapped && filter.values.contains(idx.values[static_cast<std::size_t>(v)]);
  }
  return pass;
}

std::shared_ptr<const Lineage> derive(const Cuboid& c, auto&& edit) {
  if (!c.lineage) return nullptr;
  auto next = std::make_shared<Lineage>(*c.lineage);
  edit(*next);
  return next;
}

void check_measure(const Schema& schema, const FactTable& table, const Aggregator& agg) {
  if (agg.kind == AggKind::kCount) return;
  if (!schema.has_measure(agg.measure) || !table.column(agg.measure).is_numeric()) {
    throw Error(ErrorCode::kUnknownMeasure, agg.measure);
  }
}

}  // namespace

std::string_view to_string(AggKind kind) {
  switch (kind) {
    case AggKind::kCount: return "COUNT";
    case AggKind::kSum: return "SUM";
    case AggKind::kAverage: return "AVERAGE";
    case AggKind::kMin: return "MIN";
    case AggKind::kMax: return "MAX";
  }
  return "?";
}

AggKind parse_agg_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "count") return AggKind::kCount;
  if (s == "sum") return AggKind::kSum;
  if (s == "average" || s == "avg") return AggKind::kAverage;
  if (s == "min") return AggKind::kMin;
  if (s == "max") return AggKind::kMax;
  throw Error(ErrorCode::kInvalidArgument, "unknown aggregator " + std::string(text));
}

std::string Aggregator::label() const {
  std::string s(to_string(kind));
  if (kind != AggKind::kCount) s += "(" + measure + ")";
  return s;
}

double AggState::value(AggKind kind) const {
  switch (kind) {
    case AggKind::kCount: return static_cast<double>(count);
    case AggKind::kSum: return sum;
    case AggKind::kAverage: return count == 0 ? 0.0 : sum / static_cast<double>(count);
    case AggKind::kMin: return min;
    case AggKind::kMax: return max;
  }
  return 0.0;
}

std::string Level::map(const std::string& base_value) const {
  std::string v = base_value;
  for (const auto& h : chain) v = h.parent_of(v);
  return v;
}

std::size_t Cuboid::dim_index(std::string_view dim) const {
  auto it = std::find(dims.begin(), dims.end(), dim);
  if (it == dims.end()) throw Error(ErrorCode::kUnknownDimension, std::string(dim));
  return static_cast<std::size_t>(it - dims.begin());
}

double Cuboid::total() const {
  double t = 0;
  for (const auto& [coord, state] : cells) t += value(state);
  return t;
}

Cuboid build_cuboid(std::shared_ptr<const FactTable> table, const Schema& schema,
                    const std::vector<std::string>& dims, const Aggregator& agg) {
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!schema.has_dimension(dims[i])) throw Error(ErrorCode::kUnknownDimension, dims[i]);
    if (std::find(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(i), dims[i]) !=
        dims.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate dimension " + dims[i]);
    }
  }
  check_measure(schema, *table, agg);
  auto lineage = std::make_shared<Lineage>();
  lineage->table = std::move(table);
  lineage->schema = schema;
  for (const auto& d : dims) lineage->levels.push_back(Level{d, {}});
  return evaluate(std::move(lineage), agg);
}

Cuboid evaluate(std::shared_ptr<const Lineage> lineage, const Aggregator& agg) {
  const FactTable& table = *lineage->table;
  check_measure(lineage->schema, table, agg);

  std::vector<LevelIndex> levels;
  levels.reserve(lineage->levels.size());
  for (const auto& l : lineage->levels) levels.push_back(index_level(table, l));

  std::vector<std::pair<const Column*, std::vector<char>>> masks;
  for (const auto& f : lineage->filters) masks.emplace_back(&table.column(f.level.column), filter_mask(table, f));

  const Column* measure = agg.kind == AggKind::kCount ? nullptr : &table.column(agg.measure);

  // Mixed-radix key over level value ids; every realistic cuboid fits in
  // 64 bits, wider ones fall back to vector keys.
  bool packable = true;
  unsigned __int128 radix_product = 1;
  for (const auto& l : levels) {
    radix_product *= std::max<std::size_t>(l.values.size(), 1);
    if (radix_product > std::numeric_limits<std::uint64_t>::max()) packable = false;
  }

  std::unordered_map<std::uint64_t, AggState> packed;
  std::map<std::vector<std::int64_t>, AggState> wide;
  std::vector<std::int64_t> key(levels.size());

  for (std::size_t row = 0; row < table.row_count; ++row) {
    bool pass = true;
    for (const auto& [col, mask] : masks) {
      if (!mask[col->codes[row]]) {
        pass = false;
        break;
      }
    }
    if (!pass) continue;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      key[i] = levels[i].code_to_value[levels[i].column->codes[row]];
      if (key[i] == kUnmapped) {
        const Level& l = lineage->levels[i];
        throw Error(ErrorCode::kIncompleteMapping, l.name() + ": " + levels[i].column->cell(row));
      }
    }
    const double v = measure ? measure->numbers[row] : 0.0;
    if (packable) {
      std::uint64_t k = 0;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        k = k * std::max<std::size_t>(levels[i].values.size(), 1) + static_cast<std::uint64_t>(key[i]);
      }
      packed[k].add(v);
    } else {
      wide[key].add(v);
    }
  }

  Cuboid out;
  for (const auto& l : lineage->levels) out.dims.push_back(l.name());
  out.aggregator = agg;
  auto to_coord = [&](auto&& id_at) {
    Coord c(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) c[i] = levels[i].values[id_at(i)];
    return c;
  };
  if (packable) {
    for (const auto& [k, state] : packed) {
      std::uint64_t rest = k;
      std::vector<std::size_t> ids(levels.size());
      for (std::size_t i = levels.size(); i-- > 0;) {
        const auto r = std::max<std::size_t>(levels[i].values.size(), 1);
        ids[i] = rest % r;
        rest /= r;
      }
      out.cells.emplace(to_coord([&](std::size_t i) { return ids[i]; }), state);
    }
  } else {
    for (const auto& [k, state] : wide) {
      out.cells.emplace(to_coord([&](std::size_t i) { return static_cast<std::size_t>(k[i]); }), state);
    }
  }
  out.lineage = std::move(lineage);
  return out;
}

Cuboid slice(const Cuboid& cuboid, const std::string& dim, const std::string& value) {
  const std::size_t i = cuboid.dim_index(dim);
  Cuboid out;
  out.dims = cuboid.dims;
  out.dims.erase(out.dims.begin() + static_cast<std::ptrdiff_t>(i));
  out.aggregator = cuboid.aggregator;
  for (const auto& [coord, state] : cuboid.cells) {
    if (coord[i] != value) continue;
    Coord c = coord;
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(i));
    out.cells.emplace(std::move(c), state);
  }
  out.lineage = derive(cuboid, [&](Lineage& l) {
    l.filters.push_back(LevelFilter{l.levels[i], {value}});
    l.levels.erase(l.levels.begin() + static_cast<std::ptrdiff_t>(i));
  });
  return out;
}

Cuboid dice(const Cuboid& cuboid, const std::string& dim, const std::set<std::string>& values) {
  const std::size_t i = cuboid.dim_index(dim);
  if (values.empty()) throw Error(ErrorCode::kEmptyValueSet, dim);
  Cuboid out;
  out.dims = cuboid.dims;
  out.aggregator = cuboid.aggregator;
  for (const auto& [coord, state] : cuboid.cells) {
    if (values.contains(coord[i])) out.cells.emplace_hint(out.cells.end(), coord, state);
  }
  out.lineage = derive(cuboid, [&](Lineage& l) { l.filters.push_back(LevelFilter{l.levels[i], values}); });
  return out;
}

Cuboid rollup(const Cuboid& cuboid, const std::string& dim, const Hierarchy& hierarchy) {
  const std::size_t i = cuboid.dim_index(dim);
  if (hierarchy.child_dimension != dim) {
    throw Error(ErrorCode::kHierarchyMismatch, hierarchy.child_dimension + " -> " + hierarchy.parent_name +
                                                   " does not apply to " + dim);
  }
  for (std::size_t j = 0; j < cuboid.dims.size(); ++j) {
    if (j != i && cuboid.dims[j] == hierarchy.parent_name) {
      throw Error(ErrorCode::kInvalidArgument, "roll-up target collides with dimension " + hierarchy.parent_name);
    }
  }
  std::set<std::string> missing;
  for (const auto& [coord, state] : cuboid.cells) {
    if (!hierarchy.mapping.contains(coord[i])) missing.insert(coord[i]);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kIncompleteMapping, list);
  }

  Cuboid out;
  out.dims = cuboid.dims;
  out.dims[i] = hierarchy.parent_name;
  out.aggregator = cuboid.aggregator;
  for (const auto& [coord, state] : cuboid.cells) {
    Coord c = coord;
    c[i] = hierarchy.mapping.at(coord[i]);
    out.cells[std::move(c)].merge(state);
  }
  out.lineage = derive(cuboid, [&](Lineage& l) { l.levels[i].chain.push_back(hierarchy); });
  return out;
}

Cuboid drilldown(const Cuboid& cuboid, const std::string& parent_dim, const Hierarchy& hierarchy) {
  const std::size_t i = cuboid.dim_index(parent_dim);
  if (!cuboid.lineage) throw Error(ErrorCode::kMissingProvenance, "cuboid has no fact lineage");
  const Level& level = cuboid.lineage->levels[i];
  if (level.chain.empty()) throw Error(ErrorCode::kNoFinerLevel, parent_dim + " is a base column");
  if (!(level.chain.back() == hierarchy)) {
    throw Error(ErrorCode::kHierarchyMismatch, parent_dim + " was not produced by " +
                                                   hierarchy.child_dimension + " -> " + hierarchy.parent_name);
  }
  auto next = std::make_shared<Lineage>(*cuboid.lineage);
  next->levels[i].chain.pop_back();
  return evaluate(std::move(next), cuboid.aggregator);
}

Cuboid drilldown(const Cuboid& cuboid, const std::string& parent_dim) {
  const std::size_t i = cuboid.dim_index(parent_dim);
  if (!cuboid.lineage) throw Error(ErrorCode::kMissingProvenance, "cuboid has no fact lineage");
  const Level& level = cuboid.lineage->levels[i];
  if (level.chain.empty()) throw Error(ErrorCode::kNoFinerLevel, parent_dim + " is a base column");
  return drilldown(cuboid, parent_dim, level.chain.back());
}

Cuboid project(const Cuboid& cuboid, const std::vector<std::string>& keep) {
  std::vector<std::size_t> idx;
  for (const auto& d : keep) {
    const std::size_t i = cuboid.dim_index(d);
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate dimension " + d);
    }
    idx.push_back(i);
  }
  Cuboid out;
  out.dims = keep;
  out.aggregator = cuboid.aggregator;
  for (const auto& [coord, state] : cuboid.cells) {
    Coord c;
    c.reserve(idx.size());
    for (auto i : idx) c.push_back(coord[i]);
    out.cells[std::move(c)].merge(state);
  }
  out.lineage = derive(cuboid, [&](Lineage& l) {
    std::vector<Level> levels;
    for (auto i : idx) levels.push_back(l.levels[i]);
    l.levels = std::move(levels);
  });
  return out;
}

}  // namespace tagcube
