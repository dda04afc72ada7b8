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

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tagcube/fact_store.h"

namespace tagcube {

enum class AggKind { kCount, kSum, kAverage, kMin, kMax };

std::string_view to_string(AggKind kind);
/// Accepts "count", "sum", "average"/"avg", "min", "max" in any case.
AggKind parse_agg_kind(std::string_view text);

struct Aggregator {
  AggKind kind = AggKind::kCount;
  std::string measure;  // ignored for COUNT

  static Aggregator count() { return {AggKind::kCount, {}}; }
  static Aggregator sum(std::string m) { return {AggKind::kSum, std::move(m)}; }
  static Aggregator average(std::string m) { return {AggKind::kAverage, std::move(m)}; }
  static Aggregator min(std::string m) { return {AggKind::kMin, std::move(m)}; }
  static Aggregator max(std::string m) { return {AggKind::kMax, std::move(m)}; }

  bool additive() const { return kind == AggKind::kCount || kind == AggKind::kSum; }
  std::string label() const;

  friend bool operator==(const Aggregator& a, const Aggregator& b) {
    return a.kind == b.kind && (a.kind == AggKind::kCount || a.measure == b.measure);
  }
};

/// Partial aggregate that merges exactly: AVERAGE keeps (sum, count) so
/// roll-ups never average averages.
struct AggState {
  std::int64_t count = 0;
  double sum = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) {
    ++count;
    sum += v;
    if (v < min) min = v;
    if (v > max) max = v;
  }
  void merge(const AggState& o) {
    count += o.count;
    sum += o.sum;
    if (o.min < min) min = o.min;
    if (o.max > max) max = o.max;
  }
  double value(AggKind kind) const;

  friend bool operator==(const AggState&, const AggState&) = default;
};

using Coord = std::vector<std::string>;

/// A grouping level: a base column optionally rolled up through a chain of
/// hierarchies. `name()` is the dimension name the level shows in a cuboid.
struct Level {
  std::string column;
  std::vector<Hierarchy> chain;

  const std::string& name() const { return chain.empty() ? column : chain.back().parent_name; }
  /// Maps a base attribute value through the chain; throws IncompleteMapping.
  std::string map(const std::string& base_value) const;

  friend bool operator==(const Level&, const Level&) = default;
};

struct LevelFilter {
  Level level;
  std::set<std::string> values;

  friend bool operator==(const LevelFilter&, const LevelFilter&) = default;
};

/// Everything needed to recompute a cuboid from base facts.
struct Lineage {
  std::shared_ptr<const FactTable> table;
  Schema schema;
  std::vector<Level> levels;  // parallel to Cuboid::dims
  std::vector<LevelFilter> filters;
};

struct Cuboid {
  std::vector<std::string> dims;
  Aggregator aggregator;
  std::map<Coord, AggState> cells;
  /// Null when the cuboid was derived from something other than facts
  /// (an iceberg); such cuboids cannot be drilled down.
  std::shared_ptr<const Lineage> lineage;

  /// Throws UnknownDimension.
  std::size_t dim_index(std::string_view dim) const;
  double value(const AggState& s) const { return s.value(aggregator.kind); }
  double total() const;
};

/// One pass group-by over the facts. Throws UnknownDimension/UnknownMeasure.
Cuboid build_cuboid(std::shared_ptr<const FactTable> table, const Schema& schema,
                    const std::vector<std::string>& dims, const Aggregator& agg);

/// Recomputes a cuboid from the facts described by `lineage`.
Cuboid evaluate(std::shared_ptr<const Lineage> lineage, const Aggregator& agg);

/// Keeps cells whose `dim` coordinate equals `value` and drops `dim`.
Cuboid slice(const Cuboid& cuboid, const std::string& dim, const std::string& value);
/// Keeps cells whose `dim` coordinate is in `values`; `dim` stays.
Cuboid dice(const Cuboid& cuboid, const std::string& dim, const std::set<std::string>& values);
/// Replaces `dim` by `hierarchy.parent_name`, merging cells that share a parent.
Cuboid rollup(const Cuboid& cuboid, const std::string& dim, const Hierarchy& hierarchy);
/// Undoes the most recent roll-up of `parent_dim`, recomputing from facts.
Cuboid drilldown(const Cuboid& cuboid, const std::string& parent_dim, const Hierarchy& hierarchy);
Cuboid drilldown(const Cuboid& cuboid, const std::string& parent_dim);
/// Aggregates away every dimension not listed in `keep` (result uses `keep`'s order).
Cuboid project(const Cuboid& cuboid, const std::vector<std::string>& keep);

}  // namespace tagcube
