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

#include "tagcube/synthetic.h"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <random>
#include <sstream>

#include "tagcube/error.h"

namespace tagcube {

namespace {

std::size_t cardinality(const ZipfSpec& spec, std::size_t dim) {
  return spec.cardinalities.size() == 1 ? spec.cardinalities[0] : spec.cardinalities[dim];
}

// 53 random bits mapped to [0, 1); identical on every platform, unlike
// std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ZipfSampler::ZipfSampler(std::size_t n, double s) : cdf_(n) {
  double total = 0;
  for (std::size_t r = 0; r < n; ++r) {
    total += std::pow(static_cast<double>(r + 1), -s);
    cdf_[r] = total;
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::size_t ZipfSampler::rank(double u) const {
  return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin()) + 1;
}

void validate(const ZipfSpec& spec) {
  if (spec.dims == 0) throw Error(ErrorCode::kInvalidArgument, "at least one dimension required");
  if (spec.rows == 0) throw Error(ErrorCode::kInvalidArgument, "rows must be at least 1");
  if (!(spec.skew >= 0)) throw Error(ErrorCode::kInvalidArgument, "skew must be non-negative");
  if (spec.cardinalities.size() != 1 && spec.cardinalities.size() != spec.dims) {
    throw Error(ErrorCode::kInvalidArgument, "need one cardinality or one per dimension");
  }
  for (auto c : spec.cardinalities) {
    if (c == 0) throw Error(ErrorCode::kInvalidArgument, "cardinalities must be at least 1");
  }
}

FactTable synthetic_table(const ZipfSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  FactTable table;
  table.row_count = spec.rows;
  std::vector<ZipfSampler> samplers;
  for (std::size_t d = 0; d < spec.dims; ++d) {
    samplers.emplace_back(cardinality(spec, d), spec.skew);
    Column col;
    col.name = "d" + std::to_string(d + 1);
    col.kind = ColumnKind::kDimension;
    col.codes.resize(spec.rows);
    table.columns.push_back(std::move(col));
  }
  // Dictionaries list the values actually drawn, in first-seen order, as
  // ingest would build them.
  std::vector<std::vector<std::uint32_t>> code_of_rank(spec.dims);
  for (std::size_t d = 0; d < spec.dims; ++d) code_of_rank[d].assign(cardinality(spec, d), UINT32_MAX);
  for (std::size_t row = 0; row < spec.rows; ++row) {
    for (std::size_t d = 0; d < spec.dims; ++d) {
      const std::size_t r = samplers[d].rank(unit(rng));
      Column& col = table.columns[d];
      std::uint32_t& code = code_of_rank[d][r - 1];
      if (code == UINT32_MAX) {
        code = static_cast<std::uint32_t>(col.dictionary.size());
        col.dictionary.push_back(col.name + "_" + std::to_string(r));
      }
      col.codes[row] = code;
    }
  }
  Column count;
  count.name = "count";
  count.kind = ColumnKind::kMeasure;
  count.dictionary = {"1"};
  count.codes.assign(spec.rows, 0);
  count.numbers.assign(spec.rows, 1.0);
  table.columns.push_back(std::move(count));
  return table;
}

void write_synthetic_csv(const ZipfSpec& spec, std::ostream& out) {
  const FactTable table = synthetic_table(spec);
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c].name;
  out << '\n';
  for (std::size_t row = 0; row < table.row_count; ++row) {
    for (std::size_t d = 0; d < spec.dims; ++d) out << table.columns[d].cell(row) << ',';
    out << "1\n";
  }
}

std::string synthetic_csv(const ZipfSpec& spec) {
  std::ostringstream out;
  write_synthetic_csv(spec, out);
  return out.str();
}

}  // namespace tagcube
