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

#include "cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "tagcube/bench.h"
#include "tagcube/error.h"
#include "tagcube/query.h"
#include "tagcube/service.h"
#include "tagcube/synthetic.h"

namespace tagcube {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  return out;
}

// Where a command's output goes: a file when --out is set, else stdout.
template <typename Fn>
void emit(const std::string& path, std::ostream& stdout_stream, Fn&& write) {
  if (path.empty()) {
    write(stdout_stream);
    return;
  }
  std::ofstream file = open_output(path);
  write(file);
  if (!file) throw Error(ErrorCode::kIo, "failed writing " + path);
}

struct DataArgs {
  std::string file;
  std::string delimiter = ",";
  bool no_header = false;
  std::vector<std::string> dims;
  std::vector<std::string> measures;
  std::vector<std::string> hierarchies;  // child:parent:path

  void add_to(CLI::App* cmd, bool with_schema) {
    cmd->add_option("file", file, "CSV fact table")->required();
    cmd->add_option("--delimiter", delimiter, "field delimiter")->capture_default_str();
    cmd->add_flag("--no-header", no_header, "first row is data; columns are named c1, c2, ...");
    if (!with_schema) return;
    cmd->add_option("--dims", dims, "dimension columns (default: every non-numeric column)")->delimiter(',');
    cmd->add_option("--measures", measures, "measure columns (default: every numeric column)")->delimiter(',');
    cmd->add_option("--hierarchy", hierarchies, "child:parent:mapping.csv, repeatable");
  }

  std::shared_ptr<const FactTable> table() const {
    if (delimiter.size() != 1) throw Error(ErrorCode::kInvalidArgument, "delimiter must be one character");
    IngestOptions options;
    options.delimiter = delimiter[0];
    options.header_row = !no_header;
    FactTable t = ingest_csv(read_file(file), options);
    t.id = file;
    return std::make_shared<const FactTable>(std::move(t));
  }

  Schema schema(const FactTable& t) const {
    std::vector<std::string> d = dims;
    std::vector<std::string> m = measures;
    for (const auto& c : t.columns) {
      if (dims.empty() && c.kind == ColumnKind::kDimension) d.push_back(c.name);
      if (measures.empty() && c.kind == ColumnKind::kMeasure) m.push_back(c.name);
    }
    Schema s = define_schema(t, d, m);
    for (const auto& spec : hierarchies) {
      const auto a = spec.find(':');
      const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
      if (b == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "--hierarchy wants child:parent:path");
      s = attach_hierarchy(t, s, spec.substr(0, a), spec.substr(a + 1, b - a - 1),
                           parse_hierarchy_csv(read_file(spec.substr(b + 1)), delimiter[0]));
    }
    return s;
  }
};

json schema_json(const Schema& s) {
  json hierarchies = json::array();
  for (const auto& h : s.hierarchies) {
    hierarchies.push_back({{"child", h.child_dimension}, {"parent", h.parent_name}, {"mapping", h.mapping}});
  }
  return {{"dimensions", s.dimensions}, {"measures", s.measures}, {"hierarchies", hierarchies}};
}

void print_cloud_text(const json& response, std::ostream& out) {
  const auto& tags = response["tags"];
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto& t = tags[i];
    if (t.is_string()) {
      out << "  ~" << t.get<std::string>() << "~\n";
      continue;
    }
    out << std::left << std::setw(24) << t["term"].get<std::string>() << ' ' << std::setw(12)
        << t["weight"].get<double>() << " size " << t["display_size"].get<double>() << '\n';
  }
  const auto& m = response["metrics"];
  out << "tags " << m["tag_count"] << "  entropy " << m["entropy"] << "  relative_entropy " << m["relative_entropy"];
  if (m.contains("mla_cost")) out << "  mla_cost " << m["mla_cost"];
  out << (response["approximate"].get<bool>() ? "  (approximate)" : "") << '\n';
  for (const auto& w : response["warnings"]) out << "warning: " << w.get<std::string>() << '\n';
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string(flag) + " wants dim=value, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tagcube: tag clouds over data cubes"};
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);

  // ingest
  DataArgs ingest_args;
  std::string ingest_format = "text";
  auto* ingest = app.add_subcommand("ingest", "Parse a CSV file and report the inferred columns");
  ingest_args.add_to(ingest, false);
  ingest->add_option("--format", ingest_format)->check(CLI::IsMember({"text", "json"}));

  // schema
  DataArgs schema_args;
  auto* schema_cmd = app.add_subcommand("schema", "Validate a schema and print it as JSON");
  schema_args.add_to(schema_cmd, true);

  // cloud
  DataArgs cloud_args;
  std::vector<std::string> group, slices, dices, rollups, clustering, iceberg_dims;
  std::string agg = "count", measure, similarity = "cosine", layout = "none", format = "text";
  std::size_t k = kDefaultMaxTags, budget = 1000, iceberg_limit = 0;
  std::uint64_t seed = 0;
  double glue = 0.5;
  auto* cloud = app.add_subcommand("cloud", "Compute a tag cloud");
  cloud_args.add_to(cloud, true);
  cloud->add_option("--group", group, "dimensions shown as tags")->required()->delimiter(',');
  cloud->add_option("--agg", agg, "count, sum, average, min or max")->capture_default_str();
  cloud->add_option("--measure", measure, "measure for non-count aggregators");
  cloud->add_option("--k", k, "maximum number of tags")->capture_default_str();
  cloud->add_option("--slice", slices, "dim=value, repeatable");
  cloud->add_option("--dice", dices, "dim=v1,v2,... repeatable");
  cloud->add_option("--rollup", rollups, "child:parent, repeatable");
  cloud->add_option("--cluster", clustering, "clustering dimensions")->delimiter(',');
  cloud->add_option("--similarity", similarity)->capture_default_str();
  cloud->add_option("--layout", layout, "none, nn, pwmc or mc")->capture_default_str();
  cloud->add_option("--budget", budget, "PWMC exchanges or MC iterations")->capture_default_str();
  cloud->add_option("--iceberg-limit", iceberg_limit, "answer from an iceberg of this many cells");
  cloud->add_option("--iceberg-dims", iceberg_dims, "iceberg base dimensions (default: all)")->delimiter(',');
  cloud->add_option("--seed", seed)->capture_default_str();
  cloud->add_option("--glue", glue, "similarity at or above which neighbours are glued")->capture_default_str();
  cloud->add_option("--format", format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  // gen
  ZipfSpec zipf;
  zipf.cardinalities = {1000};
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a Zipf-distributed synthetic fact table");
  gen->add_option("--dims", zipf.dims)->capture_default_str();
  gen->add_option("--cardinality", zipf.cardinalities, "one value, or one per dimension")->delimiter(',');
  gen->add_option("--rows", zipf.rows)->capture_default_str();
  gen->add_option("--skew", zipf.skew, "Zipf exponent, 0 for uniform")->capture_default_str();
  gen->add_option("--seed", zipf.seed)->capture_default_str();
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // bench-iceberg
  DataArgs bi_args;
  IcebergBenchConfig bi;
  std::string bi_out;
  auto* bench_ice = app.add_subcommand("bench-iceberg", "Iceberg quality and speed over a grid of limits and sizes");
  bi_args.add_to(bench_ice, true);
  bench_ice->add_option("--limits", bi.limits)->delimiter(',');
  bench_ice->add_option("--sizes", bi.sizes)->delimiter(',');
  bench_ice->add_option("--reps", bi.repetitions)->capture_default_str();
  bench_ice->add_option("--workers", bi.workers)->capture_default_str();
  bench_ice->add_option("--out", bi_out, "report CSV (default stdout)");

  // bench-layout
  DataArgs bl_args;
  LayoutBenchConfig bl;
  std::vector<std::string> bl_kinds = {"cosine", "tanimoto"};
  std::string bl_out, bl_summary;
  auto* bench_lay = app.add_subcommand("bench-layout", "Layout heuristics over all 1-tag clouds");
  bl_args.add_to(bench_lay, true);
  bench_lay->add_option("--similarities", bl_kinds)->delimiter(',');
  bench_lay->add_option("--limit", bl.iceberg_limit)->capture_default_str();
  bench_lay->add_option("--k", bl.k)->capture_default_str();
  bench_lay->add_option("--seed", bl.seed)->capture_default_str();
  bench_lay->add_option("--reps", bl.repetitions)->capture_default_str();
  bench_lay->add_option("--workers", bl.workers)->capture_default_str();
  bench_lay->add_option("--out", bl_out, "per-run CSV (default stdout)");
  bench_lay->add_option("--summary", bl_summary, "summary CSV (default stderr)");

  // serve
  std::string bind = "127.0.0.1", static_dir;
  int port = 8080;
  std::size_t max_k = kDefaultMaxTags;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API over HTTP");
  serve_cmd->add_option("--bind", bind)->envname("TAGCUBE_BIND")->capture_default_str();
  serve_cmd->add_option("--port", port)->envname("TAGCUBE_PORT")->capture_default_str();
  serve_cmd->add_option("--static", static_dir, "directory served at /");
  serve_cmd->add_option("--max-k", max_k, "largest k a request may ask for")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      auto t = ingest_args.table();
      json cols = json::array();
      for (const auto& c : t->columns) {
        cols.push_back({{"name", c.name}, {"kind", to_string(c.kind)}, {"distinct", c.dictionary.size()}});
      }
      if (ingest_format == "json") {
        out << json{{"rows", t->row_count}, {"columns", cols}}.dump(2) << '\n';
      } else {
        out << t->row_count << " rows\n";
        for (const auto& c : cols) {
          out << std::left << std::setw(24) << c["name"].get<std::string>() << ' ' << std::setw(10)
              << c["kind"].get<std::string>() << ' ' << c["distinct"] << " distinct\n";
        }
      }
    } else if (*schema_cmd) {
      auto t = schema_args.table();
      out << schema_json(schema_args.schema(*t)).dump(2) << '\n';
    } else if (*cloud) {
      auto t = cloud_args.table();
      const Schema s = cloud_args.schema(*t);
      json body = {{"group_dims", group}, {"k", k}, {"similarity", similarity}, {"seed", seed},
                   {"glue_threshold", glue}, {"clustering_dims", clustering}};
      body["aggregator"] = {{"function", agg}};
      if (!measure.empty()) body["aggregator"]["measure"] = measure;
      body["layout"] = {{"kind", layout}};
      if (layout == "pwmc" || layout == "PWMC") body["layout"]["exchanges"] = budget;
      if (layout == "mc" || layout == "MC") body["layout"]["iterations"] = budget;
      if (cloud->count("--iceberg-limit")) body["iceberg_limit"] = iceberg_limit;
      if (!iceberg_dims.empty()) body["iceberg_dims"] = iceberg_dims;
      json filters = json::array();
      for (const auto& sl : slices) {
        auto [dim, value] = split_assignment(sl, "--slice");
        filters.push_back({{"op", "SLICE"}, {"dim", dim}, {"values", {value}}});
      }
      for (const auto& d : dices) {
        auto [dim, values] = split_assignment(d, "--dice");
        std::vector<std::string> vs;
        std::stringstream in(values);
        for (std::string v; std::getline(in, v, ',');) vs.push_back(v);
        filters.push_back({{"op", "DICE"}, {"dim", dim}, {"values", vs}});
      }
      body["filters"] = filters;
      json rolls = json::array();
      for (const auto& r : rollups) {
        const auto colon = r.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "--rollup wants child:parent");
        rolls.push_back({{"dim", r.substr(0, colon)}, {"parent", r.substr(colon + 1)}});
      }
      body["rollups"] = rolls;

      const CloudRequest request = parse_cloud_request(body);
      const json response = run_cloud(t, s, request, direct_iceberg_source(t, s));
      if (format == "json") {
        out << response.dump(2) << '\n';
      } else {
        print_cloud_text(response, out);
      }
    } else if (*gen) {
      emit(gen_out, out, [&](std::ostream& o) { write_synthetic_csv(zipf, o); });
    } else if (*bench_ice) {
      auto t = bi_args.table();
      const Schema s = bi_args.schema(*t);
      bi.dims = s.dimensions;
      auto rows = bench_iceberg(t, s, bi);
      emit(bi_out, out, [&](std::ostream& o) { write_iceberg_report(rows, o); });
    } else if (*bench_lay) {
      auto t = bl_args.table();
      const Schema s = bl_args.schema(*t);
      bl.kinds.clear();
      for (const auto& kname : bl_kinds) bl.kinds.push_back(parse_similarity_kind(kname));
      auto rows = bench_layout(t, s, bl);
      emit(bl_out, out, [&](std::ostream& o) { write_layout_report(rows, o); });
      emit(bl_summary, err, [&](std::ostream& o) { write_layout_summary(rows, o); });
    } else if (*serve_cmd) {
      ServiceOptions options;
      options.max_k = max_k;
      Service service(options);
      err << "listening on " << bind << ':' << port << std::endl;
      serve(service, bind, port, static_dir);
    }
  } catch (const Error& e) {
    err << "tagcube: " << e.what() << '\n';
    return e.code() == ErrorCode::kIo ? 1 : 2;
  }
  return 0;
}

}  // namespace tagcube
