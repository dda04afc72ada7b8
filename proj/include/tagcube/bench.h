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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tagcube/iceberg.h"
#include "tagcube/similarity.h"

namespace tagcube {

struct IcebergBenchConfig {
  std::vector<std::string> dims;  // the cube's base dimensions; each is displayed in turn
  std::vector<std::size_t> limits = {150, 600, 1200, 4800, 19600};
  std::vector<std::size_t> sizes = {50, 100, 150, 200};
  Aggregator aggregator = Aggregator::count();
  std::size_t repetitions = 3;  // timings are medians over this many runs
  std::size_t workers = 1;
};

struct IcebergBenchRow {
  std::string display_dim;
  std::size_t limit = 0;
  std::size_t size = 0;
  std::size_t approx_tags = 0;
  std::size_t exact_tags = 0;
  std::optional<double> relative_entropy;        // of the approximate cloud
  std::optional<double> exact_relative_entropy;  // of the exact cloud
  double fp_index = 0;
  double fn_index = 0;
  double t_exact = 0;    // seconds
  double t_iceberg = 0;  // seconds, iceberg already materialized
  double relative_gain = 0;
  TagCloud approx;  // kept so the indexes can be audited
  TagCloud exact;
};

/// One row per (display dim, limit, size), sorted by that key.
std::vector<IcebergBenchRow> bench_iceberg(std::shared_ptr<const FactTable> table, const Schema& schema,
                                           const IcebergBenchConfig& config);

void write_iceberg_report(const std::vector<IcebergBenchRow>& rows, std::ostream& out);

enum class Heuristic { kNn, kPwmc, kMc };

struct HeuristicSpec {
  Heuristic kind = Heuristic::kNn;
  std::size_t budget = 0;

  std::string label() const;
};

struct LayoutBenchConfig {
  std::vector<std::string> dims;  // empty: every schema dimension
  std::vector<SimilarityKind> kinds = {SimilarityKind::kCosine, SimilarityKind::kTanimoto};
  std::vector<HeuristicSpec> heuristics = {{Heuristic::kNn, 0},
                                           {Heuristic::kPwmc, 10},
                                           {Heuristic::kPwmc, 100},
                                           {Heuristic::kPwmc, 1000},
                                           {Heuristic::kMc, 1000}};
  std::size_t iceberg_limit = 150;
  std::size_t k = kDefaultMaxTags;
  Aggregator aggregator = Aggregator::count();
  std::uint64_t seed = 1;
  std::size_t repetitions = 3;
  std::size_t workers = 1;
};

struct LayoutBenchRow {
  std::string display_dim;
  std::string clustering_dim;
  SimilarityKind kind = SimilarityKind::kCosine;
  std::string heuristic;
  std::size_t tags = 0;
  double baseline_cost = 0;  // weight-sorted order
  double cost = 0;
  double gain = 0;     // (baseline - cost) / baseline, 0 when baseline is 0
  double seconds = 0;  // median; PWMC and MC include their NN start
};

/// One row per (display dim, clustering dim, kind, heuristic) over 1-tag
/// clouds computed from a single iceberg.
std::vector<LayoutBenchRow> bench_layout(std::shared_ptr<const FactTable> table, const Schema& schema,
                                         const LayoutBenchConfig& config);

void write_layout_report(const std::vector<LayoutBenchRow>& rows, std::ostream& out);

/// Per heuristic: clouds with gain above 0, 30, 70 and 90 percent, plus the
/// mean time.
void write_layout_summary(const std::vector<LayoutBenchRow>& rows, std::ostream& out);

}  // namespace tagcube
