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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tagcube/iceberg.h"
#include "tagcube/layout.h"
#include "tagcube/similarity.h"

namespace tagcube {

enum class LayoutKind { kNone, kNn, kPwmc, kMc };

struct LayoutSpec {
  LayoutKind kind = LayoutKind::kNone;
  std::size_t budget = 0;  // PWMC exchanges or MC iterations
};

/// A full cloud request as accepted on the wire.
struct CloudRequest {
  std::vector<std::string> group_dims;
  Aggregator aggregator = Aggregator::count();
  std::vector<CloudFilter> filters;
  std::vector<RollupSpec> rollups;
  std::size_t k = kDefaultMaxTags;
  std::vector<std::string> clustering_dims;
  SimilarityKind similarity = SimilarityKind::kCosine;
  LayoutSpec layout;
  std::optional<std::size_t> iceberg_limit;
  std::vector<std::string> iceberg_dims;  // empty: every schema dimension
  std::uint64_t seed = 0;
  double glue_threshold = 0.5;
  double min_font = 10;
  double max_font = 40;

  CloudQuery engine_query() const;
};

/// Strict parse: unknown keys and ill-typed values throw InvalidArgument.
CloudRequest parse_cloud_request(const nlohmann::json& body);
nlohmann::json to_json(const CloudRequest& request);

/// Supplies the iceberg for (dims, aggregator, limit). The service plugs in
/// its cache here; offline callers materialize directly.
using IcebergSource = std::function<std::shared_ptr<const IcebergCuboid>(
    const std::vector<std::string>& dims, const Aggregator& agg, std::size_t limit)>;

IcebergSource direct_iceberg_source(std::shared_ptr<const FactTable> table, const Schema& schema);

/// Runs the whole pipeline and returns the response body. The permalink and
/// timing fields are left for the caller.
nlohmann::json run_cloud(std::shared_ptr<const FactTable> table, const Schema& schema,
                         const CloudRequest& request, const IcebergSource& icebergs);

/// Tags of a response in hinted order, skipping tokens.
TagCloud response_tags(const nlohmann::json& response);

/// Self-contained HTML fragment for iframes.
std::string render_embed(const nlohmann::json& response);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

}  // namespace tagcube
