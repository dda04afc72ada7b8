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

// Release gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracle.h"
#include "tagcube/bench.h"
#include "tagcube/error.h"
#include "tagcube/iceberg.h"
#include "tagcube/layout.h"
#include "tagcube/query.h"
#include "tagcube/service.h"
#include "tagcube/similarity.h"
#include "tagcube/synthetic.h"
#include "tagcube/tagcloud.h"

namespace tagcube {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome ok(std::string detail) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

std::vector<Aggregator> all_aggregators(const std::string& measure) {
  return {Aggregator::count(), Aggregator::sum(measure), Aggregator::average(measure), Aggregator::min(measure),
          Aggregator::max(measure)};
}

std::string describe(const TagCloud& cloud) {
  std::string out;
  for (const auto& t : cloud.tags) out += t.term + "=" + fmt("%.17g", t.weight) + " ";
  return out;
}

// Sales table: COUNT by location and SUM(profit) rolled up to countries, each
// confirmed against both hand values and the nested-loop oracle.
Outcome golden_table() {
  auto fx = testing::sales();
  const std::map<Coord, double> counts = {{{"Montreal"}, 2}, {{"Quebec"}, 1},  {{"Ontario"}, 1},
                                          {{"Paris"}, 3},    {{"Lyon"}, 1},    {{"New York"}, 2},
                                          {{"Detroit"}, 1}};
  Cuboid by_location = build_cuboid(fx.table, fx.schema, {"location"}, Aggregator::count());
  if (by_location.cells.size() != counts.size()) return fail("location cuboid has wrong cell count");
  for (const auto& [coords, state] : by_location.cells) {
    auto it = counts.find(coords);
    if (it == counts.end() || by_location.value(state) != it->second) return fail("count mismatch at " + coords[0]);
  }
  auto oracle = testing::nested_loop_group_by(*fx.table, {testing::column_key(*fx.table, "location")},
                                              [](std::size_t) { return true; }, "");
  if (auto diff = testing::compare_with_oracle(by_location, oracle); !diff.empty()) return fail(diff);

  Cuboid profit = build_cuboid(fx.table, fx.schema, {"location"}, Aggregator::sum("profit"));
  Cuboid countries = rollup(profit, "location", *fx.schema.find_hierarchy("Country"));
  const std::map<Coord, double> expected = {{{"Canada"}, 95}, {{"France"}, 45}, {{"USA"}, 30}};
  if (countries.cells.size() != expected.size()) return fail("country cuboid has wrong cell count");
  for (const auto& [coords, state] : countries.cells) {
    auto it = expected.find(coords);
    if (it == expected.end() || countries.value(state) != it->second) return fail("profit mismatch at " + coords[0]);
  }
  auto country_oracle = testing::nested_loop_group_by(
      *fx.table, {testing::column_key(*fx.table, "location", fx.schema.find_hierarchy("Country"))},
      [](std::size_t) { return true; }, "profit");
  if (auto diff = testing::compare_with_oracle(countries, country_oracle); !diff.empty()) return fail(diff);
  return ok("Canada 95, France 45, USA 30");
}

Outcome random_operations() {
  std::mt19937_64 rng(2026);
  constexpr int kTables = 500;
  for (int t = 0; t < kTables; ++t) {
    const auto rows = std::uniform_int_distribution<std::size_t>(1, 1000)(rng);
    const auto dims = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    auto fx = testing::random_table(rng, rows, dims, 20);
    if (auto diff = testing::check_operations_against_oracle(fx, rng); !diff.empty()) {
      return fail("table " + std::to_string(t) + ": " + diff);
    }
  }
  return ok(std::to_string(kTables) + " tables, 5 aggregators");
}

// Random table with a hierarchy on d0 so queries can roll up.
testing::Fixture random_fixture(std::mt19937_64& rng, std::size_t max_rows) {
  const auto rows = std::uniform_int_distribution<std::size_t>(1, max_rows)(rng);
  const auto dims = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  auto fx = testing::random_table(rng, rows, dims, 20);
  const auto parents = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
  auto h = testing::random_hierarchy(rng, *fx.table, "d0", "g0", parents);
  fx.schema = attach_hierarchy(*fx.table, fx.schema, "d0", "g0", h.mapping);
  return fx;
}

Outcome iceberg_saturation() {
  std::mt19937_64 rng(77);
  std::size_t queries = 0;
  for (int t = 0; t < 100; ++t) {
    auto fx = random_fixture(rng, 1000);
    const auto aggs = all_aggregators(std::uniform_int_distribution<int>(0, 1)(rng) ? "m0" : "m1");
    const Aggregator agg = aggs[std::uniform_int_distribution<std::size_t>(0, aggs.size() - 1)(rng)];
    const auto cells = build_cuboid(fx.table, fx.schema, fx.schema.dimensions, agg).cells.size();
    auto iceberg = materialize_iceberg(fx.table, fx.schema, fx.schema.dimensions, agg, cells);
    for (int q = 0; q < 50; ++q) {
      auto query = testing::random_query(rng, fx, 40);
      TagCloud approx = approx_cloud(iceberg, query);
      TagCloud exact = exact_cloud(fx.table, fx.schema, agg, query);
      ++queries;
      if (approx.tags != exact.tags) {
        return fail("table " + std::to_string(t) + " " + agg.label() + ": " + describe(approx) + "vs " +
                    describe(exact));
      }
    }
  }
  return ok(std::to_string(queries) + " queries");
}

std::shared_ptr<const FactTable> zipf_table(std::uint64_t seed) {
  ZipfSpec spec;
  spec.dims = 4;
  spec.cardinalities = {1000};
  spec.rows = 100000;
  spec.skew = 1.2;
  spec.seed = seed;
  return std::make_shared<const FactTable>(synthetic_table(spec));
}

Outcome quality_law() {
  std::size_t rows = 0, low = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto table = zipf_table(seed);
    Schema schema = define_schema(*table, {"d1", "d2", "d3", "d4"}, {"count"});
    IcebergBenchConfig config;
    config.dims = schema.dimensions;
    config.repetitions = 1;
    for (const auto& r : bench_iceberg(table, schema, config)) {
      ++rows;
      if (!r.relative_entropy || *r.relative_entropy >= 0.75) continue;
      ++low;
      worst = std::max({worst, r.fp_index, r.fn_index});
      if (r.fp_index > 0.1 || r.fn_index > 0.1) {
        return fail("seed " + std::to_string(seed) + " " + r.display_dim + " limit " + std::to_string(r.limit) +
                    " size " + std::to_string(r.size) + fmt(": fp %.4f fn %.4f", r.fp_index, r.fn_index));
      }
    }
  }
  return ok(std::to_string(low) + "/" + std::to_string(rows) + " low-entropy clouds, worst index " +
            fmt("%.4f", worst));
}

Outcome speed_gain() {
  std::vector<double> gains;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto table = zipf_table(seed);
    Schema schema = define_schema(*table, {"d1", "d2", "d3", "d4"}, {"count"});
    IcebergBenchConfig config;
    config.dims = schema.dimensions;
    config.limits = {150};
    config.sizes = {9};
    config.repetitions = 5;
    for (const auto& r : bench_iceberg(table, schema, config)) gains.push_back(r.relative_gain);
  }
  std::sort(gains.begin(), gains.end());
  const std::size_t n = gains.size();
  const double median = n % 2 ? gains[n / 2] : (gains[n / 2 - 1] + gains[n / 2]) / 2;
  const std::string detail = fmt("median gain %.3f over %.0f queries", median, static_cast<double>(n));
  return median > 0.5 ? ok(detail) : fail(detail);
}

TagCloud cloud_of(const std::vector<std::pair<std::string, double>>& tags) {
  TagCloud c;
  for (const auto& [term, w] : tags) c.tags.push_back(Tag{term, {term}, w});
  return c;
}

Outcome unit_values() {
  const double h = entropy(cloud_of({{"a", 3}, {"b", 1}}));
  if (std::abs(h - 0.5623) > 1e-4) return fail(fmt("entropy{3,1} = %.6f", h));
  TagCloud approx = cloud_of({{"a", 3}, {"b", 2}, {"x", 1}});
  TagCloud exact = cloud_of({{"a", 3}, {"b", 2}, {"y", 2}});
  const IndexRatio fp = false_positive_ratio(approx, exact);
  const IndexRatio fn = false_negative_ratio(approx, exact);
  // Exact rational comparison: n / d == p / q iff n * q == p * d on integers.
  if (fp.numerator * 3 != fp.denominator * 1) return fail(fmt("fp = %g/%g", fp.numerator, fp.denominator));
  if (fn.numerator * 3 != fn.denominator * 2) return fail(fmt("fn = %g/%g", fn.numerator, fn.denominator));
  return ok(fmt("entropy %.6f, fp 1/3, fn 2/3", h));
}

TagVector random_vector(std::mt19937_64& rng, std::size_t dims, bool binary) {
  TagVector v;
  std::uniform_real_distribution<double> real(0.0, 10.0);
  for (std::size_t d = 0; d < dims; ++d) {
    const bool present = std::bernoulli_distribution(0.6)(rng);
    if (!present) continue;
    v.entries[{"c" + std::to_string(d)}] = binary ? 1.0 : real(rng);
  }
  return v;
}

Outcome similarity_identities() {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    TagVector u = random_vector(rng, 12, true);
    TagVector v = random_vector(rng, 12, true);
    if (u.is_zero() && v.is_zero()) continue;
    if (u.is_zero()) u.entries[{"c0"}] = 1;
    if (v.is_zero()) v.entries[{"c1"}] = 1;
    if (tanimoto(u, v) != jaccard(u, v)) return fail("tanimoto != jaccard on binary vectors");
  }
  for (int i = 0; i < 100000; ++i) {
    TagVector x = random_vector(rng, 6, false), y = random_vector(rng, 6, false), z = random_vector(rng, 6, false);
    if (x.is_zero() || y.is_zero() || z.is_zero()) continue;
    // Angular triangle inequality for cosine, with rounding slack.
    const double sxy = cosine(x, y), syz = cosine(y, z), sxz = cosine(x, z);
    const double bound = sxy * syz - std::sqrt(std::max(0.0, 1 - sxy * sxy)) * std::sqrt(std::max(0.0, 1 - syz * syz));
    if (sxz < bound - 1e-12) return fail(fmt("cosine transitivity: %.17g < %.17g", sxz, bound));
  }
  for (int i = 0; i < 200; ++i) {
    std::vector<TagVector> vectors;
    const auto n = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    for (std::size_t t = 0; t < n; ++t) {
      TagVector v = random_vector(rng, 8, i % 2 == 0);
      v.tag = Tag{"t" + std::to_string(t), {"t" + std::to_string(t)}, 1};
      vectors.push_back(std::move(v));
    }
    for (auto kind : {SimilarityKind::kCosine, SimilarityKind::kTanimoto, SimilarityKind::kJaccard}) {
      SimilarityMatrix m = similarity_matrix(vectors, kind);
      for (std::size_t a = 0; a < n; ++a) {
        if (m(a, a) != 1) return fail("diagonal is not 1");
        for (std::size_t b = 0; b < n; ++b) {
          if (m(a, b) != m(b, a)) return fail("matrix is not symmetric");
          if (m(a, b) < 0 || m(a, b) > 1 + 1e-12) return fail("similarity out of [0, 1]");
        }
      }
    }
  }
  return ok("10^4 binary pairs, 10^5 triples, 200 matrices");
}

SimilarityMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::vector<Tag> tags;
  for (std::size_t i = 0; i < n; ++i) {
    char name[24];
    std::snprintf(name, sizeof name, "t%02zu", i);
    tags.push_back(Tag{name, {name}, static_cast<double>(n - i)});
  }
  std::vector<double> values(n * n, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) values[i * n + j] = values[j * n + i] = u(rng);
  }
  return SimilarityMatrix(std::move(tags), std::move(values), SimilarityKind::kCosine);
}

Outcome layout_hierarchy() {
  std::mt19937_64 rng(8);
  constexpr int kMatrices = 200;
  int strict = 0;
  for (int i = 0; i < kMatrices; ++i) {
    SimilarityMatrix m = random_matrix(rng, 8);
    const double eps = 1e-9;
    const LayoutOrder nn = nn_order(m);
    const double nn_cost = mla_cost(nn, m);
    const double pwmc_cost = mla_cost(pwmc_order(nn, m, 1000, i), m);
    const double brute_cost = mla_cost(brute_force_order(m), m);
    if (!(brute_cost <= pwmc_cost + eps && pwmc_cost <= nn_cost + eps)) {
      return fail(fmt("matrix %.0f: brute %.6f pwmc %.6f", i, brute_cost, pwmc_cost) + fmt(" nn %.6f", nn_cost));
    }
    if (pwmc_cost < nn_cost - eps) ++strict;
    // Neither search may end above its start, whatever the start.
    LayoutOrder start = LayoutOrder::identity(8);
    std::shuffle(start.sequence.begin(), start.sequence.end(), rng);
    const double start_cost = mla_cost(start, m);
    if (mla_cost(pwmc_order(start, m, 1000, i), m) > start_cost + eps) return fail("pwmc raised the cost");
    if (mla_cost(mc_order(start, m, 1000, i), m) > start_cost + eps) return fail("mc raised the cost");
    if (mla_cost(mc_order(nn, m, 1000, i), m) > nn_cost + eps) return fail("mc raised the nn cost");
  }
  const std::string detail = fmt("pwmc beat nn on %.0f of %.0f matrices", strict, kMatrices);
  return strict * 10 > kMatrices * 3 ? ok(detail) : fail(detail);
}

Outcome nn_complexity() {
  std::mt19937_64 rng(9);
  const std::vector<double> sizes = {50, 150, 300};
  std::vector<double> lookups;
  for (double n : sizes) {
    std::size_t reads = 0;
    nn_order(random_matrix(rng, static_cast<std::size_t>(n)), std::nullopt, &reads);
    lookups.push_back(static_cast<double>(reads));
  }
  // Least-squares c for lookups ~ c * n^2.
  double num = 0, den = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    num += lookups[i] * sizes[i] * sizes[i];
    den += std::pow(sizes[i], 4);
  }
  const double c = num / den;
  double worst = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    worst = std::max(worst, std::abs(lookups[i] - c * sizes[i] * sizes[i]) / (c * sizes[i] * sizes[i]));
  }
  const std::string detail = fmt("c = %.4f, worst deviation %.2f%%", c, worst * 100);
  return worst <= 0.10 ? ok(detail) : fail(detail);
}

std::string to_csv(const FactTable& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c].name;
  out << "\n";
  for (std::size_t r = 0; r < table.row_count; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c].cell(r);
    out << "\n";
  }
  return out.str();
}

CloudRequest random_request(std::mt19937_64& rng, const testing::Fixture& fx) {
  const CloudQuery q = testing::random_query(rng, fx, 40);
  CloudRequest req;
  req.group_dims = q.group_dims;
  req.filters = q.filters;
  req.rollups = q.rollups;
  req.k = q.k;
  const auto aggs = all_aggregators("m1");
  req.aggregator = aggs[std::uniform_int_distribution<std::size_t>(0, aggs.size() - 1)(rng)];

  // Clustering candidates: visible names that are neither grouped nor sliced.
  std::vector<std::string> names = fx.schema.dimensions;
  for (const auto& r : q.rollups) std::replace(names.begin(), names.end(), r.dim, r.parent);
  std::vector<std::string> free;
  for (const auto& n : names) {
    bool used = std::find(q.group_dims.begin(), q.group_dims.end(), n) != q.group_dims.end();
    for (const auto& f : q.filters) used = used || (f.dim == n && f.op == FilterOp::kSlice);
    if (!used) free.push_back(n);
  }
  if (!free.empty() && std::bernoulli_distribution(0.7)(rng)) {
    req.clustering_dims = {free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)]};
    req.similarity = static_cast<SimilarityKind>(std::uniform_int_distribution<int>(0, 2)(rng));
    const int layout = std::uniform_int_distribution<int>(0, 3)(rng);
    req.layout.kind = static_cast<LayoutKind>(layout);
    req.layout.budget = layout >= 2 ? 200 : 0;
    req.glue_threshold = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
  }
  if (std::bernoulli_distribution(0.5)(rng)) {
    req.iceberg_limit = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
  }
  req.seed = rng();
  return req;
}

json without_timing(std::string body) {
  json j = json::parse(body);
  j.erase("timing_ms");
  return j;
}

Outcome replay_determinism() {
  std::mt19937_64 rng(10);
  std::size_t ok_count = 0, compared = 0;
  for (int round = 0; round < 10; ++round) {
    auto fx = random_fixture(rng, 400);
    const std::string csv = to_csv(*fx.table);
    json schema = {{"dimensions", fx.schema.dimensions}, {"measures", fx.schema.measures}};
    for (const auto& h : fx.schema.hierarchies) {
      schema["hierarchies"].push_back({{"child", h.child_dimension}, {"parent", h.parent_name}, {"mapping", h.mapping}});
    }
    Service first, second;
    std::string ids[2];
    Service* services[2] = {&first, &second};
    for (int s = 0; s < 2; ++s) {
      ids[s] = json::parse(services[s]->upload_dataset(csv).body)["dataset_id"];
      if (services[s]->put_schema(ids[s], schema.dump()).status != 200) return fail("schema rejected");
    }
    for (int q = 0; q < 10; ++q) {
      const std::string body = to_json(random_request(rng, fx)).dump();
      HttpReply a = first.post_cloud(ids[0], body);
      HttpReply again = first.post_cloud(ids[0], body);
      HttpReply b = second.post_cloud(ids[1], body);
      ++compared;
      if (a.status != again.status || a.status != b.status) return fail("status differs for " + body);
      if (a.status != 200) {
        if (a.body != b.body || a.body != again.body) return fail("error body differs for " + body);
        continue;
      }
      ++ok_count;
      const json ja = without_timing(a.body);
      if (ja != without_timing(again.body) || ja != without_timing(b.body)) return fail("response differs for " + body);
      HttpReply stored = first.handle("GET", ja["permalink"].get<std::string>(), "");
      if (stored.status != 200 || without_timing(stored.body) != ja) return fail("permalink replay differs");
    }
  }
  return ok(std::to_string(compared) + " queries, " + std::to_string(ok_count) + " answered");
}

}  // namespace
}  // namespace tagcube

int main() {
  using namespace tagcube;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria = {
      {"golden_table", golden_table, 1},
      {"random_operations_match_oracle", random_operations, 60},
      {"iceberg_saturation", iceberg_saturation, 0},
      {"quality_law", quality_law, 600},
      {"iceberg_speed_gain", speed_gain, 300},
      {"entropy_and_index_values", unit_values, 0},
      {"similarity_identities", similarity_identities, 0},
      {"layout_heuristic_hierarchy", layout_hierarchy, 120},
      {"nn_quadratic_lookups", nn_complexity, 0},
      {"replay_determinism", replay_determinism, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = fail(std::string("threw: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (out.pass && c.budget_seconds > 0 && seconds > c.budget_seconds) {
      out = fail(out.detail + fmt("; took %.1fs, budget %.0fs", seconds, c.budget_seconds));
    }
    if (!out.pass) ++failures;
    std::printf("%s %s (%s) %.2fs\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
