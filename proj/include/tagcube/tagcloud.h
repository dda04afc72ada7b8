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
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tagcube/cube.h"

namespace tagcube {

inline constexpr std::size_t kDefaultMaxTags = 150;

/// Joins coordinate values with an en dash, e.g. "Canada–March".
std::string make_term(const Coord& coords);

/// A (term, object, weight) triplet; the object is the coordinate tuple.
/// Identity is by coords only.
struct Tag {
  std::string term;
  Coord coords;
  double weight = 0;

  friend bool operator==(const Tag&, const Tag&) = default;
};

struct TagCloud {
  std::vector<Tag> tags;
  std::vector<std::string> source_dims;
  bool approximate = false;

  std::size_t size() const { return tags.size(); }
  bool empty() const { return tags.empty(); }
  bool contains(const Coord& coords) const;

  friend bool operator==(const TagCloud&, const TagCloud&) = default;
};

/// Strict weak order used for every ranking: heavier first, then
/// lexicographically smaller coords.
bool ranks_before(double wa, const Coord& a, double wb, const Coord& b);

/// The k heaviest cells as tags, heaviest first. Throws InvalidArgument for
/// k == 0 and NegativeWeight if a selected cell has a negative value.
TagCloud top_k(const Cuboid& cuboid, std::size_t k);

/// -sum p log p with natural log and 0 log 0 = 0. Throws AllZeroWeights.
double entropy(const TagCloud& cloud);
/// entropy / log(size). Throws SingletonCloud for fewer than two tags.
double relative_entropy(const TagCloud& cloud);

/// Quality index kept as the weights it was computed from, so callers can
/// compare exactly against rational expectations.
struct IndexRatio {
  double numerator = 0;
  double denominator = 1;
  double value() const { return denominator == 0 ? 0.0 : numerator / denominator; }
};

/// Heaviest A-tag missing from E over heaviest A-tag (A weights).
/// Throws EmptyCloud when A is empty.
IndexRatio false_positive_ratio(const TagCloud& approx, const TagCloud& exact);
/// Heaviest E-tag missing from A over heaviest E-tag (E weights).
/// Throws EmptyCloud when E is empty.
IndexRatio false_negative_ratio(const TagCloud& approx, const TagCloud& exact);
inline double false_positive_index(const TagCloud& a, const TagCloud& e) { return false_positive_ratio(a, e).value(); }
inline double false_negative_index(const TagCloud& a, const TagCloud& e) { return false_negative_ratio(a, e).value(); }

enum class SortKey { kByWeightDesc, kByTermAsc };
TagCloud sort_tags(const TagCloud& cloud, SortKey key);

struct RemoveCoords {
  std::set<Coord> coords;
};
struct KeepTop {
  std::size_t n = 0;
};
struct MinWeight {
  double weight = 0;
};
using PruneMode = std::variant<RemoveCoords, KeepTop, MinWeight>;

/// Subset of the cloud; surviving tags keep their relative order.
TagCloud prune(const TagCloud& cloud, const PruneMode& mode);

struct ScaledTag {
  Tag tag;
  double display_size = 0;
};

/// Linear map of [w_min, w_max] onto [min_size, max_size]; a flat cloud gets
/// the midpoint. Throws InvalidArgument unless 0 < min_size <= max_size.
std::vector<ScaledTag> font_scale(const TagCloud& cloud, double min_size, double max_size);

}  // namespace tagcube
