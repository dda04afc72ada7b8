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
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tagcube/cube.h"
#include "tagcube/tagcloud.h"

namespace tagcube {

/// The `limit` highest-ranked cells of one cuboid, kept in memory as the
/// substrate for approximate clouds.
struct IcebergCuboid {
  std::vector<std::string> base_dims;
  std::size_t limit = 0;
  Aggregator aggregator;
  std::map<Coord, AggState> cells;
  std::size_t full_cell_count = 0;  // cells in the cuboid before the cut
  std::shared_ptr<const FactTable> table;
  Schema schema;

  /// The retained cells as a cuboid over base_dims (no fact lineage).
  Cuboid as_cuboid() const;
};

/// Group-by over `dims`, then keeps the `limit` cells that rank first under
/// `ranks_before` (largest aggregate value, ties by coords).
IcebergCuboid materialize_iceberg(std::shared_ptr<const FactTable> table, const Schema& schema,
                                  const std::vector<std::string>& dims, const Aggregator& agg,
                                  std::size_t limit);

enum class FilterOp { kSlice, kDice };

struct CloudFilter {
  FilterOp op = FilterOp::kDice;
  std::string dim;
  std::set<std::string> values;

  friend bool operator==(const CloudFilter&, const CloudFilter&) = default;
};

/// Rolls `dim` up to the schema hierarchy whose parent level is `parent`.
struct RollupSpec {
  std::string dim;
  std::string parent;

  friend bool operator==(const RollupSpec&, const RollupSpec&) = default;
};

/// A tag-cloud query: roll-ups apply first, then filters (which name
/// post-roll-up dimensions), then the result is projected onto group_dims
/// and cut to the k heaviest cells. A sliced dimension cannot be grouped.
struct CloudQuery {
  std::vector<std::string> group_dims;
  std::vector<CloudFilter> filters;
  std::vector<RollupSpec> rollups;
  std::size_t k = kDefaultMaxTags;
};

/// Query result before the top-k cut, answered from the iceberg's cells.
/// Throws DimensionNotInIceberg for names the iceberg cannot resolve.
Cuboid approx_cuboid(const IcebergCuboid& iceberg, const CloudQuery& query);
/// Query result before the top-k cut, computed from all facts.
Cuboid exact_cuboid(std::shared_ptr<const FactTable> table, const Schema& schema, const Aggregator& agg,
                    const CloudQuery& query);

TagCloud approx_cloud(const IcebergCuboid& iceberg, const CloudQuery& query);
TagCloud exact_cloud(std::shared_ptr<const FactTable> table, const Schema& schema, const Aggregator& agg,
                     const CloudQuery& query);

/// (t_exact - t_iceberg) / t_exact. Throws NonPositiveBaseline.
double relative_gain(double t_exact, double t_iceberg);

}  // namespace tagcube
