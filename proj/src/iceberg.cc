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

#include "tagcube/iceberg.h"

#include <algorithm>

#include "tagcube/error.h"

namespace tagcube {

namespace {

bool has(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void validate_shape(const CloudQuery& q) {
  if (q.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (q.group_dims.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one group dimension required");
  for (std::size_t i = 0; i < q.group_dims.size(); ++i) {
    if (std::count(q.group_dims.begin(), q.group_dims.end(), q.group_dims[i]) > 1) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate group dimension " + q.group_dims[i]);
    }
  }
  for (const auto& f : q.filters) {
    if (f.op == FilterOp::kSlice) {
      if (f.values.size() != 1) throw Error(ErrorCode::kInvalidArgument, "slice on " + f.dim + " needs exactly one value");
      if (has(q.group_dims, f.dim)) throw Error(ErrorCode::kInvalidArgument, "sliced dimension " + f.dim + " cannot be grouped");
    } else if (f.values.empty()) {
      throw Error(ErrorCode::kEmptyValueSet, f.dim);
    }
  }
}

// Roll-ups, then filters, then projection onto the group dimensions.
Cuboid run_pipeline(Cuboid c, const Schema& schema, const CloudQuery& q, ErrorCode unresolved) {
  for (const auto& r : q.rollups) {
    if (!has(c.dims, r.dim)) throw Error(unresolved, r.dim);
    const Hierarchy* h = schema.find_hierarchy(r.parent);
    if (!h) throw Error(ErrorCode::kUnknownDimension, "no hierarchy named " + r.parent);
    c = rollup(c, r.dim, *h);
  }
  for (const auto& f : q.filters) {
    if (!has(c.dims, f.dim)) throw Error(unresolved, f.dim);
    c = f.op == FilterOp::kSlice ? slice(c, f.dim, *f.values.begin()) : dice(c, f.dim, f.values);
  }
  for (const auto& g : q.group_dims) {
    if (!has(c.dims, g)) throw Error(unresolved, g);
  }
  return project(c, q.group_dims);
}

}  // namespace

Cuboid IcebergCuboid::as_cuboid() const {
  Cuboid c;
  c.dims = base_dims;
  c.aggregator = aggregator;
  c.cells = cells;
  return c;
}

IcebergCuboid materialize_iceberg(std::shared_ptr<const FactTable> table, const Schema& schema,
                                  const std::vector<std::string>& dims, const Aggregator& agg,
                                  std::size_t limit) {
  if (limit == 0) throw Error(ErrorCode::kInvalidArgument, "iceberg limit must be at least 1");
  Cuboid full = build_cuboid(table, schema, dims, agg);

  using Cell = std::map<Coord, AggState>::const_iterator;
  std::vector<Cell> cells;
  cells.reserve(full.cells.size());
  for (auto it = full.cells.cbegin(); it != full.cells.cend(); ++it) cells.push_back(it);
  const AggKind kind = agg.kind;
  const std::size_t keep = std::min(limit, cells.size());
  std::nth_element(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end(),
                   [kind](Cell a, Cell b) {
                     return ranks_before(a->second.value(kind), a->first, b->second.value(kind), b->first);
                   });

  IcebergCuboid ice;
  ice.base_dims = dims;
  ice.limit = limit;
  ice.aggregator = agg;
  ice.full_cell_count = full.cells.size();
  for (std::size_t i = 0; i < keep; ++i) ice.cells.emplace(cells[i]->first, cells[i]->second);
  ice.table = std::move(table);
  ice.schema = schema;
  return ice;
}

Cuboid approx_cuboid(const IcebergCuboid& iceberg, const CloudQuery& query) {
  validate_shape(query);
  return run_pipeline(iceberg.as_cuboid(), iceberg.schema, query, ErrorCode::kDimensionNotInIceberg);
}

Cuboid exact_cuboid(std::shared_ptr<const FactTable> table, const Schema& schema, const Aggregator& agg,
                    const CloudQuery& query) {
  validate_shape(query);
  for (const auto& r : query.rollups) {
    if (!schema.has_dimension(r.dim)) throw Error(ErrorCode::kUnknownDimension, r.dim);
  }
  // Base columns the query touches, in schema order.
  auto base_of = [&](const std::string& name) -> std::string {
    for (const auto& r : query.rollups) {
      if (r.parent == name) return r.dim;
    }
    if (!schema.has_dimension(name)) throw Error(ErrorCode::kUnknownDimension, name);
    return name;
  };
  std::set<std::string> touched;
  for (const auto& g : query.group_dims) touched.insert(base_of(g));
  for (const auto& f : query.filters) touched.insert(base_of(f.dim));
  std::vector<std::string> needed;
  for (const auto& d : schema.dimensions) {
    if (touched.contains(d)) needed.push_back(d);
  }
  CloudQuery reduced = query;
  std::erase_if(reduced.rollups, [&](const RollupSpec& r) { return !touched.contains(r.dim); });

  Cuboid source = build_cuboid(std::move(table), schema, needed, agg);
  return run_pipeline(std::move(source), schema, reduced, ErrorCode::kUnknownDimension);
}

TagCloud approx_cloud(const IcebergCuboid& iceberg, const CloudQuery& query) {
  TagCloud cloud = top_k(approx_cuboid(iceberg, query), query.k);
  cloud.approximate = true;
  return cloud;
}

TagCloud exact_cloud(std::shared_ptr<const FactTable> table, const Schema& schema, const Aggregator& agg,
                     const CloudQuery& query) {
  return top_k(exact_cuboid(std::move(table), schema, agg, query), query.k);
}

double relative_gain(double t_exact, double t_iceberg) {
  if (!(t_exact > 0)) throw Error(ErrorCode::kNonPositiveBaseline, "exact time must be positive");
  return (t_exact - t_iceberg) / t_exact;
}

}  // namespace tagcube
