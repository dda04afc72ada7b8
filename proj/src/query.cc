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

#include "tagcube/query.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "tagcube/error.h"

namespace tagcube {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); }

std::string string_of(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> strings_of(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(string_of(e, what));
  return out;
}

std::uint64_t unsigned_of(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  bad(what + " must be a non-negative integer");
}

double number_of(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) bad(what + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      bad("unknown field '" + key + "' in " + what);
    }
  }
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

Aggregator parse_aggregator(const json& j) {
  if (j.is_string()) {
    Aggregator a{parse_agg_kind(j.get<std::string>()), ""};
    if (a.kind != AggKind::kCount) bad("aggregator " + a.label() + " needs a measure");
    return a;
  }
  only_keys(j, {"function", "measure"}, "aggregator");
  if (!j.contains("function")) bad("aggregator.function is required");
  Aggregator a{parse_agg_kind(string_of(j["function"], "aggregator.function")), ""};
  if (j.contains("measure")) a.measure = string_of(j["measure"], "aggregator.measure");
  if (a.kind != AggKind::kCount && a.measure.empty()) bad("aggregator " + std::string(to_string(a.kind)) + " needs a measure");
  if (a.kind == AggKind::kCount) a.measure.clear();
  return a;
}

LayoutSpec parse_layout(const json& j) {
  LayoutSpec spec;
  std::string kind;
  if (j.is_string()) {
    kind = upper(j.get<std::string>());
  } else {
    only_keys(j, {"kind", "exchanges", "iterations"}, "layout");
    if (!j.contains("kind")) bad("layout.kind is required");
    kind = upper(string_of(j["kind"], "layout.kind"));
  }
  if (kind == "NONE") {
    spec.kind = LayoutKind::kNone;
  } else if (kind == "NN") {
    spec.kind = LayoutKind::kNn;
  } else if (kind == "PWMC") {
    spec.kind = LayoutKind::kPwmc;
    spec.budget = 1000;
    if (j.is_object() && j.contains("exchanges")) spec.budget = unsigned_of(j["exchanges"], "layout.exchanges");
  } else if (kind == "MC") {
    spec.kind = LayoutKind::kMc;
    spec.budget = 1000;
    if (j.is_object() && j.contains("iterations")) spec.budget = unsigned_of(j["iterations"], "layout.iterations");
  } else {
    bad("unknown layout " + kind);
  }
  return spec;
}

json layout_json(const LayoutSpec& spec) {
  switch (spec.kind) {
    case LayoutKind::kNone: return {{"kind", "NONE"}};
    case LayoutKind::kNn: return {{"kind", "NN"}};
    case LayoutKind::kPwmc: return {{"kind", "PWMC"}, {"exchanges", spec.budget}};
    case LayoutKind::kMc: return {{"kind", "MC"}, {"iterations", spec.budget}};
  }
  return nullptr;
}

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

CloudQuery CloudRequest::engine_query() const {
  CloudQuery q;
  q.group_dims = group_dims;
  q.filters = filters;
  q.rollups = rollups;
  q.k = k;
  return q;
}

CloudRequest parse_cloud_request(const json& body) {
  only_keys(body,
            {"group_dims", "aggregator", "filters", "rollups", "k", "clustering_dims", "similarity", "layout",
             "iceberg_limit", "iceberg_dims", "seed", "glue_threshold", "font"},
            "cloud request");
  CloudRequest r;
  if (!body.contains("group_dims")) bad("group_dims is required");
  r.group_dims = strings_of(body["group_dims"], "group_dims");
  if (body.contains("aggregator")) r.aggregator = parse_aggregator(body["aggregator"]);
  if (body.contains("filters")) {
    if (!body["filters"].is_array()) bad("filters must be an array");
    for (const auto& f : body["filters"]) {
      only_keys(f, {"op", "dim", "values"}, "filter");
      if (!f.contains("op") || !f.contains("dim") || !f.contains("values")) bad("filter needs op, dim and values");
      CloudFilter filter;
      const std::string op = upper(string_of(f["op"], "filter.op"));
      if (op == "SLICE") {
        filter.op = FilterOp::kSlice;
      } else if (op == "DICE") {
        filter.op = FilterOp::kDice;
      } else {
        bad("unknown filter op " + op);
      }
      filter.dim = string_of(f["dim"], "filter.dim");
      for (auto& v : strings_of(f["values"], "filter.values")) filter.values.insert(std::move(v));
      r.filters.push_back(std::move(filter));
    }
  }
  if (body.contains("rollups")) {
    if (!body["rollups"].is_array()) bad("rollups must be an array");
    for (const auto& x : body["rollups"]) {
      only_keys(x, {"dim", "parent"}, "rollup");
      if (!x.contains("dim") || !x.contains("parent")) bad("rollup needs dim and parent");
      r.rollups.push_back(RollupSpec{string_of(x["dim"], "rollup.dim"), string_of(x["parent"], "rollup.parent")});
    }
  }
  if (body.contains("k")) r.k = unsigned_of(body["k"], "k");
  if (body.contains("clustering_dims")) r.clustering_dims = strings_of(body["clustering_dims"], "clustering_dims");
  if (body.contains("similarity")) r.similarity = parse_similarity_kind(string_of(body["similarity"], "similarity"));
  if (body.contains("layout")) r.layout = parse_layout(body["layout"]);
  if (body.contains("iceberg_limit") && !body["iceberg_limit"].is_null()) {
    r.iceberg_limit = unsigned_of(body["iceberg_limit"], "iceberg_limit");
    if (*r.iceberg_limit == 0) bad("iceberg_limit must be at least 1");
  }
  if (body.contains("iceberg_dims")) r.iceberg_dims = strings_of(body["iceberg_dims"], "iceberg_dims");
  if (body.contains("seed")) r.seed = unsigned_of(body["seed"], "seed");
  if (body.contains("glue_threshold")) r.glue_threshold = number_of(body["glue_threshold"], "glue_threshold");
  if (body.contains("font")) {
    only_keys(body["font"], {"min", "max"}, "font");
    if (body["font"].contains("min")) r.min_font = number_of(body["font"]["min"], "font.min");
    if (body["font"].contains("max")) r.max_font = number_of(body["font"]["max"], "font.max");
  }
  if (r.k == 0) bad("k must be at least 1");
  if (!(r.glue_threshold >= -1 && r.glue_threshold <= 1)) bad("glue_threshold must lie in [-1, 1]");
  if (!(r.min_font > 0 && r.max_font >= r.min_font)) bad("font sizes must satisfy 0 < min <= max");
  return r;
}

json to_json(const CloudRequest& r) {
  json filters = json::array();
  for (const auto& f : r.filters) {
    filters.push_back({{"op", f.op == FilterOp::kSlice ? "SLICE" : "DICE"}, {"dim", f.dim}, {"values", f.values}});
  }
  json rollups = json::array();
  for (const auto& x : r.rollups) rollups.push_back({{"dim", x.dim}, {"parent", x.parent}});
  json agg = {{"function", to_string(r.aggregator.kind)}};
  if (r.aggregator.kind != AggKind::kCount) agg["measure"] = r.aggregator.measure;
  return {{"group_dims", r.group_dims},
          {"aggregator", agg},
          {"filters", filters},
          {"rollups", rollups},
          {"k", r.k},
          {"clustering_dims", r.clustering_dims},
          {"similarity", to_string(r.similarity)},
          {"layout", layout_json(r.layout)},
          {"iceberg_limit", r.iceberg_limit ? json(*r.iceberg_limit) : json(nullptr)},
          {"iceberg_dims", r.iceberg_dims},
          {"seed", r.seed},
          {"glue_threshold", r.glue_threshold},
          {"font", {{"min", r.min_font}, {"max", r.max_font}}}};
}

IcebergSource direct_iceberg_source(std::shared_ptr<const FactTable> table, const Schema& schema) {
  return [table = std::move(table), schema](const std::vector<std::string>& dims, const Aggregator& agg,
                                            std::size_t limit) {
    return std::make_shared<const IcebergCuboid>(materialize_iceberg(table, schema, dims, agg, limit));
  };
}

json run_cloud(std::shared_ptr<const FactTable> table, const Schema& schema, const CloudRequest& req,
               const IcebergSource& icebergs) {
  const CloudQuery q = req.engine_query();
  json warnings = json::array();

  std::shared_ptr<const IcebergCuboid> ice;
  if (req.iceberg_limit) {
    const std::vector<std::string>& dims = req.iceberg_dims.empty() ? schema.dimensions : req.iceberg_dims;
    ice = icebergs(dims, req.aggregator, *req.iceberg_limit);
    if (!req.aggregator.additive()) {
      warnings.push_back(req.aggregator.label() + " over an iceberg may differ from the exact value without bound");
    }
  }
  auto cuboid_for = [&](const CloudQuery& query) {
    return ice ? approx_cuboid(*ice, query) : exact_cuboid(table, schema, req.aggregator, query);
  };

  TagCloud cloud = top_k(cuboid_for(q), req.k);
  cloud.approximate = ice != nullptr;

  std::optional<SimilarityMatrix> matrix;
  if (!req.clustering_dims.empty()) {
    for (const auto& d : req.clustering_dims) {
      if (std::find(q.group_dims.begin(), q.group_dims.end(), d) != q.group_dims.end()) {
        throw Error(ErrorCode::kOverlappingDims, d);
      }
    }
    // The joint cuboid shares the query's filters and roll-ups.
    CloudQuery joint = q;
    joint.group_dims.insert(joint.group_dims.end(), req.clustering_dims.begin(), req.clustering_dims.end());
    matrix = similarity_matrix(cloud, cuboid_for(joint), req.clustering_dims, req.similarity);
  }

  LayoutOrder order = LayoutOrder::identity(cloud.size());
  if (req.layout.kind != LayoutKind::kNone) {
    if (!matrix) bad("layout " + layout_json(req.layout)["kind"].get<std::string>() + " needs clustering_dims");
    order = nn_order(*matrix);
    if (req.layout.kind == LayoutKind::kPwmc) order = pwmc_order(order, *matrix, req.layout.budget, req.seed);
    if (req.layout.kind == LayoutKind::kMc) order = mc_order(order, *matrix, req.layout.budget, req.seed);
  }

  std::vector<HintedItem> items;
  if (matrix) {
    items = emit_hints(order, *matrix, req.glue_threshold);
  } else {
    for (auto i : order.sequence) items.push_back(HintedItem{i, HintToken::kGlued});
  }

  const auto scaled = font_scale(cloud, req.min_font, req.max_font);
  json tags = json::array();
  for (const auto& item : items) {
    if (item.is_token()) {
      tags.push_back(item.token == HintToken::kGlued ? "GLUED" : "PERMUTABLE");
      continue;
    }
    const Tag& t = cloud.tags[*item.tag];
    tags.push_back({{"term", t.term}, {"coords", t.coords}, {"weight", t.weight},
                    {"display_size", scaled[*item.tag].display_size}});
  }

  const bool has_mass = std::any_of(cloud.tags.begin(), cloud.tags.end(), [](const Tag& t) { return t.weight > 0; });
  json metrics = {{"tag_count", cloud.size()}, {"entropy", nullptr}, {"relative_entropy", nullptr}};
  if (has_mass) metrics["entropy"] = entropy(cloud);
  if (has_mass && cloud.size() >= 2) metrics["relative_entropy"] = relative_entropy(cloud);
  if (matrix) metrics["mla_cost"] = mla_cost(order, *matrix);

  return {{"dataset", table->id},
          {"query", to_json(req)},
          {"source_dims", cloud.source_dims},
          {"approximate", cloud.approximate},
          {"warnings", warnings},
          {"tags", tags},
          {"metrics", metrics}};
}

TagCloud response_tags(const json& response) {
  TagCloud cloud;
  cloud.approximate = response.value("approximate", false);
  for (const auto& item : response.at("tags")) {
    if (item.is_string()) continue;
    cloud.tags.push_back(Tag{item.at("term").get<std::string>(), item.at("coords").get<Coord>(),
                             item.at("weight").get<double>()});
  }
  return cloud;
}

std::string render_embed(const json& response) {
  // Runs of GLUED tags share one nowrap group so they never break apart.
  std::vector<std::vector<const json*>> groups;
  bool glue_next = false;
  for (const auto& item : response.at("tags")) {
    if (item.is_string()) {
      glue_next = item.get<std::string>() == "GLUED";
      continue;
    }
    if (!glue_next || groups.empty()) groups.emplace_back();
    groups.back().push_back(&item);
    glue_next = false;
  }
  auto tag_html = [](const json& t) {
    char size[32];
    std::snprintf(size, sizeof size, "%.4g", t.at("display_size").get<double>());
    char weight[32];
    std::snprintf(weight, sizeof weight, "%.12g", t.at("weight").get<double>());
    return "<span class=\"tag\" style=\"font-size:" + std::string(size) + "px\" title=\"" + weight + "\">" +
           html_escape(t.at("term").get<std::string>()) + "</span>";
  };
  std::string html = "<div class=\"tagcube-cloud\" style=\"font-family:sans-serif;line-height:1.3\">\n";
  for (const auto& g : groups) {
    if (g.size() == 1) {
      html += tag_html(*g[0]) + "\n";
      continue;
    }
    html += "<span class=\"glued\" style=\"white-space:nowrap\">";
    for (std::size_t i = 0; i < g.size(); ++i) html += (i ? " " : "") + tag_html(*g[i]);
    html += "</span>\n";
  }
  html += "</div>\n";
  return html;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace tagcube
