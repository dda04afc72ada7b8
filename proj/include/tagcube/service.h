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
#include <mutex>
#include <shared_mutex>
#include <string>

#include "json.hpp"
#include "tagcube/fact_store.h"
#include "tagcube/query.h"

namespace tagcube {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceOptions {
  std::size_t max_k = kDefaultMaxTags;
};

/// Transport-free JSON API. Every method is safe to call concurrently.
class Service {
 public:
  explicit Service(ServiceOptions options = {});

  /// Routes `method path` to an endpoint. Unknown routes give 404.
  HttpReply handle(const std::string& method, const std::string& path, const std::string& body);

  HttpReply upload_dataset(const std::string& csv);
  HttpReply list_datasets() const;
  HttpReply dimensions(const std::string& dataset) const;
  HttpReply put_schema(const std::string& dataset, const std::string& body);
  HttpReply post_cloud(const std::string& dataset, const std::string& body);
  HttpReply get_cloud(const std::string& permalink) const;
  HttpReply embed_cloud(const std::string& permalink) const;

 private:
  struct SchemaSlot {
    Schema schema;
    std::uint64_t version = 0;
  };
  struct CacheSlot {
    std::shared_ptr<const IcebergCuboid> iceberg;  // null while materializing
  };

  std::shared_ptr<const IcebergCuboid> iceberg(const std::string& dataset, std::uint64_t version,
                                               std::shared_ptr<const FactTable> table, const Schema& schema,
                                               const std::vector<std::string>& dims, const Aggregator& agg,
                                               std::size_t limit);

  ServiceOptions options_;
  DatasetRegistry datasets_;

  mutable std::shared_mutex schema_mutex_;
  std::map<std::string, SchemaSlot> schemas_;

  std::mutex cache_mutex_;
  std::map<std::string, CacheSlot> icebergs_;

  mutable std::shared_mutex cloud_mutex_;
  std::map<std::string, std::string> clouds_;  // permalink id -> stored response
};

/// Blocks serving `service` over HTTP. `static_dir` may be empty.
void serve(Service& service, const std::string& host, int port, const std::string& static_dir);

}  // namespace tagcube
