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

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "oracle.h"
#include "tagcube/synthetic.h"

namespace tagcube {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    HttpReply up = service.handle("POST", "/datasets", testing::kSalesCsv);
    ASSERT_EQ(up.status, 201) << up.body;
    id = json::parse(up.body)["dataset_id"];
    json schema = {{"dimensions", {"location", "time", "salesman", "product"}},
                   {"measures", {"cost", "profit"}},
                   {"hierarchies", {{{"child", "location"}, {"parent", "Country"}, {"mapping", testing::city_to_country()}}}}};
    HttpReply put = service.handle("PUT", "/datasets/" + id + "/schema", schema.dump());
    ASSERT_EQ(put.status, 200) << put.body;
  }

  HttpReply cloud(const json& request) { return service.handle("POST", "/datasets/" + id + "/clouds", request.dump()); }

  json ok_cloud(const json& request) {
    HttpReply r = cloud(request);
    EXPECT_EQ(r.status, 200) << r.body;
    return json::parse(r.body);
  }

  static std::vector<std::pair<std::string, double>> weights(const json& response) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& t : response["tags"]) {
      if (t.is_object()) out.emplace_back(t["term"], t["weight"]);
    }
    return out;
  }

  Service service;
  std::string id;
};

TEST_F(ServiceTest, UploadAndList) {
  HttpReply again = service.handle("POST", "/datasets", testing::kSalesCsv);
  EXPECT_EQ(again.status, 201);
  EXPECT_NE(json::parse(again.body)["dataset_id"], id);
  EXPECT_EQ(json::parse(again.body)["rows"], 11);

  HttpReply empty = service.handle("POST", "/datasets", "");
  EXPECT_EQ(empty.status, 400);
  EXPECT_EQ(json::parse(empty.body)["error"], "EmptyInput");

  json list = json::parse(service.handle("GET", "/datasets", "").body);
  ASSERT_EQ(list["datasets"].size(), 2u);
  EXPECT_EQ(list["datasets"][0]["schema_version"], 1);
  EXPECT_TRUE(list["datasets"][1]["schema_version"].is_null());
}

TEST_F(ServiceTest, Dimensions) {
  json d = json::parse(service.handle("GET", "/datasets/" + id + "/dimensions", "").body);
  std::map<std::string, int> distinct;
  for (const auto& x : d["dimensions"]) distinct[x["name"]] = x["distinct"];
  EXPECT_EQ(distinct["location"], 7);
  EXPECT_EQ(distinct["product"], 4);
  EXPECT_EQ(distinct["Country"], 3);
  EXPECT_EQ(distinct.count("cost"), 0u);
  EXPECT_EQ(service.handle("GET", "/datasets/nope/dimensions", "").status, 404);
}

TEST_F(ServiceTest, SchemaErrors) {
  json overlap = {{"dimensions", {"location", "cost"}}, {"measures", {"cost"}}};
  HttpReply r = service.handle("PUT", "/datasets/" + id + "/schema", overlap.dump());
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(json::parse(r.body)["error"], "OverlappingRoles");
  EXPECT_EQ(service.handle("PUT", "/datasets/ds99/schema", overlap.dump()).status, 404);
  EXPECT_EQ(service.handle("PUT", "/datasets/" + id + "/schema", "{not json").status, 400);

  json good = {{"dimensions", {"location"}}, {"measures", {"profit"}}};
  r = service.handle("PUT", "/datasets/" + id + "/schema", good.dump());
  EXPECT_EQ(json::parse(r.body)["schema_version"], 2);
}

TEST_F(ServiceTest, ExactCloud) {
  json r = ok_cloud({{"group_dims", {"location"}}, {"aggregator", "COUNT"}, {"k", 3}});
  const std::vector<std::pair<std::string, double>> want = {{"Paris", 3}, {"Montreal", 2}, {"New York", 2}};
  EXPECT_EQ(weights(r), want);
  EXPECT_FALSE(r["approximate"]);
  EXPECT_NEAR(r["metrics"]["entropy"].get<double>(), 1.0789, 1e-4);
  EXPECT_EQ(r["metrics"]["tag_count"], 3);
  EXPECT_NEAR(r["metrics"]["entropy"].get<double>(), entropy(response_tags(r)), 1e-9);
  EXPECT_EQ(r["tags"][0]["display_size"], 40.0);
  EXPECT_EQ(r["tags"][1]["display_size"], 10.0);
}

TEST_F(ServiceTest, IcebergCloud) {
  json r = ok_cloud({{"group_dims", {"location"}}, {"k", 3}, {"iceberg_limit", 3},
                     {"iceberg_dims", {"location", "product"}}});
  const std::vector<std::pair<std::string, double>> want = {{"Montreal", 2}, {"New York", 2}, {"Paris", 2}};
  EXPECT_EQ(weights(r), want);
  EXPECT_TRUE(r["approximate"]);
  EXPECT_NEAR(r["metrics"]["relative_entropy"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(r["warnings"].empty());

  json avg = ok_cloud({{"group_dims", {"location"}}, {"aggregator", {{"function", "AVERAGE"}, {"measure", "profit"}}},
                       {"iceberg_limit", 5}});
  EXPECT_EQ(avg["warnings"].size(), 1u);
}

TEST_F(ServiceTest, RollupAndFilters) {
  json r = ok_cloud({{"group_dims", {"Country"}},
                     {"aggregator", {{"function", "SUM"}, {"measure", "profit"}}},
                     {"rollups", {{{"dim", "location"}, {"parent", "Country"}}}}});
  const std::vector<std::pair<std::string, double>> want = {{"Canada", 95}, {"France", 45}, {"USA", 30}};
  EXPECT_EQ(weights(r), want);

  json sliced = ok_cloud({{"group_dims", {"location"}},
                          {"filters", {{{"op", "SLICE"}, {"dim", "product"}, {"values", {"shoe"}}}}}});
  const std::vector<std::pair<std::string, double>> want_sliced = {{"Montreal", 2}, {"Paris", 2}};
  EXPECT_EQ(weights(sliced), want_sliced);
}

TEST_F(ServiceTest, ValidationErrors) {
  auto status_of = [&](const json& q) { return cloud(q).status; };
  EXPECT_EQ(status_of({{"group_dims", {"location"}}, {"k", 0}}), 422);
  EXPECT_EQ(status_of({{"group_dims", {"location"}}, {"k", 151}}), 422);
  EXPECT_EQ(status_of({{"group_dims", {"region"}}}), 422);
  EXPECT_EQ(status_of({{"group_dims", {"location"}}, {"colour", 1}}), 422);
  EXPECT_EQ(status_of({{"group_dims", {"location"}}, {"layout", "NN"}}), 422);
  EXPECT_EQ(status_of({{"group_dims", {"time"}}, {"iceberg_limit", 3}, {"iceberg_dims", {"location"}}}), 422);
  EXPECT_EQ(service.handle("POST", "/datasets/" + id + "/clouds", "[").status, 400);
  EXPECT_EQ(service.handle("POST", "/datasets/ds42/clouds", json{{"group_dims", {"x"}}}.dump()).status, 404);

  HttpReply up = service.handle("POST", "/datasets", testing::kSalesCsv);
  const std::string bare = json::parse(up.body)["dataset_id"];
  EXPECT_EQ(service.handle("POST", "/datasets/" + bare + "/clouds", json{{"group_dims", {"location"}}}.dump()).status,
            422);
  EXPECT_EQ(service.handle("DELETE", "/datasets", "").status, 404);
}

TEST_F(ServiceTest, ClusteredLayoutWithGlue) {
  json r = ok_cloud({{"group_dims", {"location"}}, {"k", 3}, {"clustering_dims", {"product"}},
                     {"similarity", "COSINE"}, {"layout", "NN"}, {"glue_threshold", 0.5}});
  ASSERT_EQ(r["tags"].size(), 4u);
  EXPECT_EQ(r["tags"][0]["term"], "Paris");
  EXPECT_EQ(r["tags"][1], "GLUED");
  EXPECT_EQ(r["tags"][2]["term"], "Montreal");
  EXPECT_EQ(r["tags"][3]["term"], "New York");
  EXPECT_TRUE(r["metrics"].contains("mla_cost"));

  EXPECT_EQ(cloud({{"group_dims", {"location"}}, {"clustering_dims", {"location"}}}).status, 422);
}

TEST_F(ServiceTest, PermalinkReplay) {
  json q = {{"group_dims", {"location", "product"}}, {"k", 5}, {"clustering_dims", {"time"}},
            {"layout", {{"kind", "PWMC"}, {"exchanges", 50}}}, {"seed", 9}};
  json first = ok_cloud(q);
  json second = ok_cloud(q);
  EXPECT_EQ(first["permalink"], second["permalink"]);
  first.erase("timing_ms");
  second.erase("timing_ms");
  EXPECT_EQ(first, second);

  const std::string link = first["permalink"];
  HttpReply a = service.handle("GET", link, "");
  HttpReply b = service.handle("GET", link, "");
  EXPECT_EQ(a.status, 200);
  EXPECT_EQ(a.body, b.body);
  json stored = json::parse(a.body);
  stored.erase("timing_ms");
  EXPECT_EQ(stored, first);
  EXPECT_EQ(service.handle("GET", "/clouds/0000", "").status, 404);
  EXPECT_EQ(service.handle("GET", "/clouds/0000/embed", "").status, 404);
}

TEST_F(ServiceTest, Embed) {
  json r = ok_cloud({{"group_dims", {"location"}}, {"k", 3}, {"clustering_dims", {"product"}}, {"layout", "NN"}});
  HttpReply html = service.handle("GET", r["permalink"].get<std::string>() + "/embed", "");
  EXPECT_EQ(html.status, 200);
  EXPECT_EQ(html.content_type.rfind("text/html", 0), 0u);
  std::size_t tags = 0;
  for (std::size_t at = html.body.find("class=\"tag\""); at != std::string::npos;
       at = html.body.find("class=\"tag\"", at + 1)) {
    ++tags;
  }
  EXPECT_EQ(tags, 3u);
  EXPECT_NE(html.body.find("font-size:40px"), std::string::npos);
  EXPECT_NE(html.body.find("font-size:10px"), std::string::npos);
  EXPECT_NE(html.body.find("white-space:nowrap"), std::string::npos);
}

TEST(ServiceConcurrencyTest, IcebergMaterializesOnceUnderLoad) {
  Service service;
  ZipfSpec spec;
  spec.dims = 4;
  spec.cardinalities = {500};
  spec.rows = 50000;
  spec.skew = 1.1;
  const std::string id = json::parse(service.handle("POST", "/datasets", synthetic_csv(spec)).body)["dataset_id"];
  json schema = {{"dimensions", {"d1", "d2", "d3", "d4"}}, {"measures", {"count"}}};
  ASSERT_EQ(service.handle("PUT", "/datasets/" + id + "/schema", schema.dump()).status, 200);

  const std::string query = json{{"group_dims", {"d2"}}, {"k", 20}, {"iceberg_limit", 150}}.dump();
  std::vector<std::vector<HttpReply>> replies(4);
  std::vector<std::thread> clients;
  for (std::size_t c = 0; c < replies.size(); ++c) {
    clients.emplace_back([&, c] {
      for (;;) {
        replies[c].push_back(service.handle("POST", "/datasets/" + id + "/clouds", query));
        if (replies[c].back().status != 409) break;
        std::this_thread::yield();
      }
    });
  }
  for (auto& t : clients) t.join();

  std::optional<json> first;
  for (const auto& per_client : replies) {
    for (const auto& r : per_client) {
      ASSERT_TRUE(r.status == 200 || r.status == 409) << r.body;
      if (r.status == 409) EXPECT_EQ(json::parse(r.body)["error"], "Busy");
    }
    json body = json::parse(per_client.back().body);
    body.erase("timing_ms");
    if (!first) first = body;
    EXPECT_EQ(body, *first);
  }
}

TEST(QueryTest, RequestRoundTrip) {
  json body = {{"group_dims", {"a", "b"}},
               {"aggregator", {{"function", "max"}, {"measure", "m"}}},
               {"filters", {{{"op", "dice"}, {"dim", "c"}, {"values", {"x", "y"}}}}},
               {"k", 12},
               {"layout", {{"kind", "MC"}, {"iterations", 30}}},
               {"iceberg_limit", 40},
               {"seed", 3}};
  CloudRequest r = parse_cloud_request(body);
  EXPECT_EQ(r.aggregator, Aggregator::max("m"));
  EXPECT_EQ(r.layout.kind, LayoutKind::kMc);
  EXPECT_EQ(r.layout.budget, 30u);
  CloudRequest again = parse_cloud_request(to_json(r));
  EXPECT_EQ(to_json(again), to_json(r));
}

TEST(QueryTest, EmbedEscapes) {
  json response = {{"tags", {{{"term", "<b>&"}, {"coords", {"<b>&"}}, {"weight", 1}, {"display_size", 12}}}}};
  std::string html = render_embed(response);
  EXPECT_NE(html.find("&lt;b&gt;&amp;"), std::string::npos);
  EXPECT_EQ(html.find("<b>"), std::string::npos);
}

TEST(QueryTest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace tagcube
