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

#include "tagcube/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "tagcube/error.h"
#include "tagcube/layout.h"

namespace tagcube {

namespace {

// Runs fn(0..n-1) on `workers` threads; the first exception is rethrown.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
}

// Median wall time of `reps` calls; the last result is kept in `out`.
template <typename Fn, typename Out>
double timed(std::size_t reps, Fn&& fn, Out& out) {
  std::vector<double> seconds;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    out = fn();
    seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return median(std::move(seconds));
}

std::optional<double> maybe_relative_entropy(const TagCloud& c) {
  const bool mass = std::any_of(c.tags.begin(), c.tags.end(), [](const Tag& t) { return t.weight > 0; });
  if (c.size() < 2 || !mass) return std::nullopt;
  return relative_entropy(c);
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

}  // namespace

std::vector<IcebergBenchRow> bench_iceberg(std::shared_ptr<const FactTable> table, const Schema& schema,
                                           const IcebergBenchConfig& config) {
  if (config.dims.empty() || config.limits.empty() || config.sizes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "dims, limits and sizes must be non-empty");
  }
  if (config.repetitions == 0) throw Error(ErrorCode::kInvalidArgument, "repetitions must be at least 1");

  std::vector<std::shared_ptr<const IcebergCuboid>> icebergs(config.limits.size());
  parallel_for(config.limits.size(), config.workers, [&](std::size_t i) {
    icebergs[i] = std::make_shared<const IcebergCuboid>(
        materialize_iceberg(table, schema, config.dims, config.aggregator, config.limits[i]));
  });

  const std::size_t per_dim = config.limits.size() * config.sizes.size();
  std::vector<IcebergBenchRow> rows(config.dims.size() * per_dim);
  parallel_for(rows.size(), config.workers, [&](std::size_t i) {
    const std::size_t d = i / per_dim;
    const std::size_t l = (i % per_dim) / config.sizes.size();
    const std::size_t s = i % config.sizes.size();
    IcebergBenchRow& row = rows[i];
    row.display_dim = config.dims[d];
    row.limit = config.limits[l];
    row.size = config.sizes[s];

    CloudQuery q;
    q.group_dims = {row.display_dim};
    q.k = row.size;
    row.t_exact = timed(config.repetitions, [&] { return exact_cloud(table, schema, config.aggregator, q); }, row.exact);
    row.t_iceberg = timed(config.repetitions, [&] { return approx_cloud(*icebergs[l], q); }, row.approx);

    row.approx_tags = row.approx.size();
    row.exact_tags = row.exact.size();
    row.relative_entropy = maybe_relative_entropy(row.approx);
    row.exact_relative_entropy = maybe_relative_entropy(row.exact);
    if (row.approx.empty()) {
      row.fp_index = 0;
      row.fn_index = row.exact.empty() ? 0 : 1;
    } else {
      row.fp_index = false_positive_index(row.approx, row.exact);
      row.fn_index = false_negative_index(row.approx, row.exact);
    }
    row.relative_gain = row.t_exact > 0 ? relative_gain(row.t_exact, row.t_iceberg) : 0;
  });
  return rows;
}

void write_iceberg_report(const std::vector<IcebergBenchRow>& rows, std::ostream& out) {
  out << "display_dim,limit,size,approx_tags,exact_tags,relative_entropy,exact_relative_entropy,fp_index,fn_index,"
         "t_exact,t_iceberg,relative_gain\n";
  for (const auto& r : rows) {
    out << r.display_dim << ',' << r.limit << ',' << r.size << ',' << r.approx_tags << ',' << r.exact_tags << ','
        << csv_optional(r.relative_entropy) << ',' << csv_optional(r.exact_relative_entropy) << ','
        << csv_number(r.fp_index) << ',' << csv_number(r.fn_index) << ',' << csv_number(r.t_exact) << ','
        << csv_number(r.t_iceberg) << ',' << csv_number(r.relative_gain) << '\n';
  }
}

std::string HeuristicSpec::label() const {
  switch (kind) {
    case Heuristic::kNn: return "NN";
    case Heuristic::kPwmc: return "PWMC" + std::to_string(budget);
    case Heuristic::kMc: return "MC" + std::to_string(budget);
  }
  return "?";
}

std::vector<LayoutBenchRow> bench_layout(std::shared_ptr<const FactTable> table, const Schema& schema,
                                         const LayoutBenchConfig& config) {
  const std::vector<std::string>& dims = config.dims.empty() ? schema.dimensions : config.dims;
  if (dims.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two dimensions");
  if (config.repetitions == 0) throw Error(ErrorCode::kInvalidArgument, "repetitions must be at least 1");
  const IcebergCuboid ice = materialize_iceberg(table, schema, dims, config.aggregator, config.iceberg_limit);

  struct Task {
    std::size_t display;
    std::size_t clustering;
    SimilarityKind kind;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    for (std::size_t c = 0; c < dims.size(); ++c) {
      if (c == d) continue;
      for (auto kind : config.kinds) tasks.push_back({d, c, kind});
    }
  }

  const std::size_t per_task = config.heuristics.size();
  std::vector<LayoutBenchRow> rows(tasks.size() * per_task);
  parallel_for(tasks.size(), config.workers, [&](std::size_t t) {
    const Task& task = tasks[t];
    CloudQuery q;
    q.group_dims = {dims[task.display]};
    q.k = config.k;
    const TagCloud cloud = approx_cloud(ice, q);
    q.group_dims.push_back(dims[task.clustering]);
    const SimilarityMatrix m = similarity_matrix(cloud, approx_cuboid(ice, q), {dims[task.clustering]}, task.kind);
    const double baseline = mla_cost(LayoutOrder::identity(m.size()), m);

    for (std::size_t h = 0; h < per_task; ++h) {
      const HeuristicSpec& spec = config.heuristics[h];
      LayoutOrder order;
      const double seconds = timed(config.repetitions, [&] {
        LayoutOrder o = nn_order(m);
        if (spec.kind == Heuristic::kPwmc) o = pwmc_order(o, m, spec.budget, config.seed);
        if (spec.kind == Heuristic::kMc) o = mc_order(o, m, spec.budget, config.seed);
        return o;
      }, order);
      LayoutBenchRow& row = rows[t * per_task + h];
      row.display_dim = dims[task.display];
      row.clustering_dim = dims[task.clustering];
      row.kind = task.kind;
      row.heuristic = spec.label();
      row.tags = m.size();
      row.baseline_cost = baseline;
      row.cost = mla_cost(order, m);
      row.gain = baseline > 0 ? (baseline - row.cost) / baseline : 0;
      row.seconds = seconds;
    }
  });
  return rows;
}

void write_layout_report(const std::vector<LayoutBenchRow>& rows, std::ostream& out) {
  out << "display_dim,clustering_dim,similarity,heuristic,tags,baseline_cost,cost,gain,seconds\n";
  for (const auto& r : rows) {
    out << r.display_dim << ',' << r.clustering_dim << ',' << to_string(r.kind) << ',' << r.heuristic << ','
        << r.tags << ',' << csv_number(r.baseline_cost) << ',' << csv_number(r.cost) << ',' << csv_number(r.gain)
        << ',' << csv_number(r.seconds) << '\n';
  }
}

void write_layout_summary(const std::vector<LayoutBenchRow>& rows, std::ostream& out) {
  struct Summary {
    std::size_t clouds = 0;
    std::size_t above[4] = {0, 0, 0, 0};
    double seconds = 0;
  };
  static constexpr double kThresholds[4] = {0.0, 0.3, 0.7, 0.9};
  std::vector<std::string> order;
  std::map<std::string, Summary> by_key;
  for (const auto& r : rows) {
    const std::string key = std::string(to_string(r.kind)) + "," + r.heuristic;
    if (!by_key.contains(key)) order.push_back(key);
    Summary& s = by_key[key];
    ++s.clouds;
    s.seconds += r.seconds;
    for (int i = 0; i < 4; ++i) s.above[i] += r.gain > kThresholds[i];
  }
  out << "similarity,heuristic,clouds,gain_gt_0,gain_gt_30,gain_gt_70,gain_gt_90,mean_seconds\n";
  for (const auto& key : order) {
    const Summary& s = by_key[key];
    out << key << ',' << s.clouds << ',' << s.above[0] << ',' << s.above[1] << ',' << s.above[2] << ','
        << s.above[3] << ',' << csv_number(s.seconds / static_cast<double>(s.clouds)) << '\n';
  }
}

}  // namespace tagcube
