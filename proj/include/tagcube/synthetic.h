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
#include <ostream>
#include <string>
#include <vector>

#include "tagcube/fact_store.h"

namespace tagcube {

/// Independent Zipf-distributed dimension columns plus a constant "count"
/// measure of 1 per row.
struct ZipfSpec {
  std::size_t dims = 4;
  std::vector<std::size_t> cardinalities;  // one entry per dim, or a single entry for all
  std::size_t rows = 1000;
  double skew = 1.0;  // 0 is uniform
  std::uint64_t seed = 1;
};

/// Throws InvalidArgument on an invalid spec.
void validate(const ZipfSpec& spec);

/// Column names are d1..dN; dimension i takes values "d<i>_<rank>" with rank
/// 1 the most frequent.
FactTable synthetic_table(const ZipfSpec& spec);

/// The same table as CSV with a header row.
void write_synthetic_csv(const ZipfSpec& spec, std::ostream& out);
std::string synthetic_csv(const ZipfSpec& spec);

/// Inverse-CDF sampler over ranks 1..n with P(r) proportional to r^-s.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double s);
  /// `u` in [0, 1).
  std::size_t rank(double u) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace tagcube
