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

#include "tagcube/service.h"

#include <chrono>
#include <set>
#include <sstream>
#include <vector>

#include "tagcube/error.h"

namespace tagcube {

using nlohmann::json;

namespace {

HttpReply json_reply(int status, const json& body) { return HttpReply{status, "application/json", body.dump()}; }

HttpReply error_reply(int status, ErrorCode code, const std::string& detail) {
  return json_reply(status, {{"error", error_name(code)}, {"detail", detail}});
}

HttpReply error_reply(int status, const Error& e) { return error_reply(status, e.code(), e.detail()); }

// 404 for missing resources, 409 for busy icebergs, `otherwise` for the rest.
int status_for(const Error& e, int otherwise) {
  switch (e.code()) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kBusy: return 409;
    default: return otherwise;
  }
}

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "body is not valid JSON");
  return j;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string p = path.substr(0, path.find('?'));
  std::stringstream in(p);
  std::string part;
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(options) {}

HttpReply Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  const auto p = split_path(path);
  if (p.size() == 1 && p[0] == "datasets") {
    if (method == "POST") return upload_dataset(body);
    if (method == "GET") return list_datasets();
  } else if (p.size() == 3 && p[0] == "datasets") {
    if (p[2] == "dimensions" && method == "GET") return dimensions(p[1]);
    if (p[2] == "schema" && method == "PUT") return put_schema(p[1], body);
    if (p[2] == "clouds" && method == "POST") return post_cloud(p[1], body);
  } else if (p.size() == 2 && p[0] == "clouds" && method == "GET") {
    return get_cloud(p[1]);
  } else if (p.size() == 3 && p[0] == "clouds" && p[2] == "embed" && method == "GET") {
    return embed_cloud(p[1]);
  }
  return error_reply(404, ErrorCode::kNotFound, method + " " + path);
}

HttpReply Service::upload_dataset(const std::string& csv) {
  try {
    FactTable table = ingest_csv(csv);
    json columns = json::array();
    for (const auto& c : table.columns) columns.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
    const std::size_t rows = table.row_count;
    const std::string id = datasets_.add(std::move(table));
    return json_reply(201, {{"dataset_id", id}, {"rows", rows}, {"columns", columns}});
  } catch (const Error& e) {
    return error_reply(400, e);
  }
}

HttpReply Service::list_datasets() const {
  json out = json::array();
  std::shared_lock lock(schema_mutex_);
  for (const auto& id : datasets_.ids()) {
    auto table = datasets_.get(id);
    auto it = schemas_.find(id);
    out.push_back({{"dataset_id", id},
                   {"rows", table->row_count},
                   {"columns", table->columns.size()},
                   {"schema_version", it == schemas_.end() ? json(nullptr) : json(it->second.version)}});
  }
  return json_reply(200, {{"datasets", out}});
}

HttpReply Service::dimensions(const std::string& dataset) const {
  try {
    auto table = datasets_.get(dataset);
    std::optional<Schema> schema;
    {
      std::shared_lock lock(schema_mutex_);
      if (auto it = schemas_.find(dataset); it != schemas_.end()) schema = it->second.schema;
    }
    json dims = json::array();
    for (const auto& c : table->columns) {
      if (c.kind != ColumnKind::kDimension) continue;
      dims.push_back({{"name", c.name},
                      {"distinct", c.dictionary.size()},
                      {"in_schema", schema && schema->has_dimension(c.name)}});
    }
    if (schema) {
      for (const auto& h : schema->hierarchies) {
        std::set<std::string> parents;
        for (const auto& [child, parent] : h.mapping) parents.insert(parent);
        dims.push_back({{"name", h.parent_name}, {"distinct", parents.size()}, {"parent_of", h.child_dimension}});
      }
    }
    return json_reply(200, {{"dataset_id", dataset}, {"dimensions", dims}});
  } catch (const Error& e) {
    return error_reply(status_for(e, 422), e);
  }
}

HttpReply Service::put_schema(const std::string& dataset, const std::string& body) {
  json j;
  try {
    j = parse_body(body);
  } catch (const Error& e) {
    return error_reply(400, e);
  }
  try {
    auto table = datasets_.get(dataset);
    if (!j.is_object() || !j.contains("dimensions") || !j.contains("measures")) {
      throw Error(ErrorCode::kInvalidArgument, "schema needs dimensions and measures");
    }
    auto names = [](const json& v, const char* what) {
      if (!v.is_array()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be an array");
      std::vector<std::string> out;
      for (const auto& e : v) {
        if (!e.is_string()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must hold strings");
        out.push_back(e.get<std::string>());
      }
      return out;
    };
    Schema schema = define_schema(*table, names(j["dimensions"], "dimensions"), names(j["measures"], "measures"));
    if (j.contains("hierarchies")) {
      if (!j["hierarchies"].is_array()) throw Error(ErrorCode::kInvalidArgument, "hierarchies must be an array");
      for (const auto& h : j["hierarchies"]) {
        if (!h.is_object() || !h.contains("child") || !h.contains("parent") || !h.contains("mapping") ||
            !h["child"].is_string() || !h["parent"].is_string() || !h["mapping"].is_object()) {
          throw Error(ErrorCode::kInvalidArgument, "hierarchy needs child, parent and a mapping object");
        }
        std::map<std::string, std::string> mapping;
        for (const auto& [child, parent] : h["mapping"].items()) {
          if (!parent.is_string()) throw Error(ErrorCode::kInvalidArgument, "mapping values must be strings");
          mapping[child] = parent.get<std::string>();
        }
        schema = attach_hierarchy(*table, schema, h["child"].get<std::string>(), h["parent"].get<std::string>(),
                                  std::move(mapping));
      }
    }
    std::uint64_t version;
    {
      std::unique_lock lock(schema_mutex_);
      SchemaSlot& slot = schemas_[dataset];
      slot.schema = std::move(schema);
      version = ++slot.version;
    }
    {
      // Icebergs of older versions can never be hit again.
      std::lock_guard lock(cache_mutex_);
      std::erase_if(icebergs_, [&](const auto& e) { return e.first.starts_with(dataset + "\n"); });
    }
    return json_reply(200, {{"dataset_id", dataset}, {"schema_version", version}});
  } catch (const Error& e) {
    return error_reply(status_for(e, 422), e);
  }
}

std::shared_ptr<const IcebergCuboid> Service::iceberg(const std::string& dataset, std::uint64_t version,
                                                      std::shared_ptr<const FactTable> table, const Schema& schema,
                                                      const std::vector<std::string>& dims, const Aggregator& agg,
                                                      std::size_t limit) {
  std::string key = dataset + "\n" + std::to_string(version) + "\n" + agg.label() + "\n" + std::to_string(limit);
  for (const auto& d : dims) key += "\n" + d;
  {
    std::lock_guard lock(cache_mutex_);
    auto [it, inserted] = icebergs_.try_emplace(key);
    if (!inserted) {
      if (it->second.iceberg) return it->second.iceberg;
      throw Error(ErrorCode::kBusy, "iceberg for " + agg.label() + " is materializing; retry");
    }
  }
  // This request owns the materialization; others see the empty slot.
  try {
    auto ice = std::make_shared<const IcebergCuboid>(materialize_iceberg(std::move(table), schema, dims, agg, limit));
    std::lock_guard lock(cache_mutex_);
    icebergs_[key].iceberg = ice;
    return ice;
  } catch (...) {
    std::lock_guard lock(cache_mutex_);
    icebergs_.erase(key);
    throw;
  }
}

HttpReply Service::post_cloud(const std::string& dataset, const std::string& body) {
  json parsed;
  try {
    parsed = parse_body(body);
  } catch (const Error& e) {
    return error_reply(400, e);
  }
  try {
    auto table = datasets_.get(dataset);
    SchemaSlot slot;
    {
      std::shared_lock lock(schema_mutex_);
      auto it = schemas_.find(dataset);
      if (it == schemas_.end()) throw Error(ErrorCode::kInvalidArgument, "dataset " + dataset + " has no schema");
      slot = it->second;
    }
    const CloudRequest request = parse_cloud_request(parsed);
    if (request.k > options_.max_k) {
      throw Error(ErrorCode::kInvalidArgument, "k exceeds the cap of " + std::to_string(options_.max_k));
    }
    IcebergSource source = [&](const std::vector<std::string>& dims, const Aggregator& agg, std::size_t limit) {
      return iceberg(dataset, slot.version, table, slot.schema, dims, agg, limit);
    };

    const auto start = std::chrono::steady_clock::now();
    json response = run_cloud(table, slot.schema, request, source);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    response["schema_version"] = slot.version;
    const std::string id = sha256_hex(response.dump()).substr(0, 16);
    response["permalink"] = "/clouds/" + id;
    response["timing_ms"] = ms;
    std::string text = response.dump();
    {
      // The first rendering wins, so a permalink always replays the same bytes.
      std::unique_lock lock(cloud_mutex_);
      clouds_.try_emplace(id, text);
    }
    return HttpReply{200, "application/json", std::move(text)};
  } catch (const Error& e) {
    return error_reply(status_for(e, 422), e);
  }
}

HttpReply Service::get_cloud(const std::string& permalink) const {
  std::shared_lock lock(cloud_mutex_);
  auto it = clouds_.find(permalink);
  if (it == clouds_.end()) return error_reply(404, ErrorCode::kNotFound, "cloud " + permalink);
  return HttpReply{200, "application/json", it->second};
}

HttpReply Service::embed_cloud(const std::string& permalink) const {
  std::string stored;
  {
    std::shared_lock lock(cloud_mutex_);
    auto it = clouds_.find(permalink);
    if (it == clouds_.end()) return error_reply(404, ErrorCode::kNotFound, "cloud " + permalink);
    stored = it->second;
  }
  return HttpReply{200, "text/html; charset=utf-8", render_embed(json::parse(stored))};
}

}  // namespace tagcube
