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

#include "tagcube/tagcloud.h"

#include <algorithm>
#include <cmath>

#include "tagcube/error.h"

namespace tagcube {

std::string make_term(const Coord& coords) {
  std::string term;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i > 0) term += "\xE2\x80\x93";
    term += coords[i];
  }
  return term;
}

bool TagCloud::contains(const Coord& coords) const {
  return std::any_of(tags.begin(), tags.end(), [&](const Tag& t) { return t.coords == coords; });
}

bool ranks_before(double wa, const Coord& a, double wb, const Coord& b) {
  if (wa != wb) return wa > wb;
  return a < b;
}

TagCloud top_k(const Cuboid& cuboid, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  struct Ranked {
    double weight;
    const Coord* coords;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(cuboid.cells.size());
  for (const auto& [coord, state] : cuboid.cells) ranked.push_back({cuboid.value(state), &coord});
  auto before = [](const Ranked& a, const Ranked& b) { return ranks_before(a.weight, *a.coords, b.weight, *b.coords); };
  const std::size_t n = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(), before);

  TagCloud cloud;
  cloud.source_dims = cuboid.dims;
  cloud.tags.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked[i].weight < 0) {
      throw Error(ErrorCode::kNegativeWeight, make_term(*ranked[i].coords) + " has weight " +
                                                  std::to_string(ranked[i].weight));
    }
    cloud.tags.push_back(Tag{make_term(*ranked[i].coords), *ranked[i].coords, ranked[i].weight});
  }
  return cloud;
}

double entropy(const TagCloud& cloud) {
  double total = 0;
  for (const auto& t : cloud.tags) total += t.weight;
  if (!(total > 0)) throw Error(ErrorCode::kAllZeroWeights, "entropy needs a positive weight");
  double h = 0;
  for (const auto& t : cloud.tags) {
    if (t.weight <= 0) continue;
    const double p = t.weight / total;
    h -= p * std::log(p);
  }
  return h;
}

double relative_entropy(const TagCloud& cloud) {
  if (cloud.size() < 2) throw Error(ErrorCode::kSingletonCloud, "relative entropy needs two tags");
  return entropy(cloud) / std::log(static_cast<double>(cloud.size()));
}

namespace {

IndexRatio missing_ratio(const TagCloud& from, const TagCloud& other) {
  IndexRatio r{0, 0};
  std::set<Coord> other_coords;
  for (const auto& t : other.tags) other_coords.insert(t.coords);
  for (const auto& t : from.tags) {
    r.denominator = std::max(r.denominator, t.weight);
    if (!other_coords.contains(t.coords)) r.numerator = std::max(r.numerator, t.weight);
  }
  return r;
}

}  // namespace

IndexRatio false_positive_ratio(const TagCloud& approx, const TagCloud& exact) {
  if (approx.empty()) throw Error(ErrorCode::kEmptyCloud, "approximate cloud is empty");
  return missing_ratio(approx, exact);
}

IndexRatio false_negative_ratio(const TagCloud& approx, const TagCloud& exact) {
  if (exact.empty()) throw Error(ErrorCode::kEmptyCloud, "exact cloud is empty");
  return missing_ratio(exact, approx);
}

TagCloud sort_tags(const TagCloud& cloud, SortKey key) {
  TagCloud out = cloud;
  if (key == SortKey::kByWeightDesc) {
    std::stable_sort(out.tags.begin(), out.tags.end(), [](const Tag& a, const Tag& b) { return a.weight > b.weight; });
  } else {
    std::stable_sort(out.tags.begin(), out.tags.end(), [](const Tag& a, const Tag& b) { return a.term < b.term; });
  }
  return out;
}

TagCloud prune(const TagCloud& cloud, const PruneMode& mode) {
  TagCloud out = cloud;
  out.tags.clear();
  if (const auto* remove = std::get_if<RemoveCoords>(&mode)) {
    for (const auto& t : cloud.tags) {
      if (!remove->coords.contains(t.coords)) out.tags.push_back(t);
    }
  } else if (const auto* keep = std::get_if<KeepTop>(&mode)) {
    std::vector<std::size_t> order(cloud.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t n = std::min(keep->n, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const Tag& ta = cloud.tags[a];
                        const Tag& tb = cloud.tags[b];
                        return ranks_before(ta.weight, ta.coords, tb.weight, tb.coords);
                      });
    order.resize(n);
    std::sort(order.begin(), order.end());
    for (auto i : order) out.tags.push_back(cloud.tags[i]);
  } else {
    const double w = std::get<MinWeight>(mode).weight;
    for (const auto& t : cloud.tags) {
      if (t.weight >= w) out.tags.push_back(t);
    }
  }
  return out;
}

std::vector<ScaledTag> font_scale(const TagCloud& cloud, double min_size, double max_size) {
  if (!(min_size > 0) || !(max_size >= min_size)) {
    throw Error(ErrorCode::kInvalidArgument, "font sizes must satisfy 0 < min <= max");
  }
  std::vector<ScaledTag> out;
  if (cloud.empty()) return out;
  auto [lo, hi] = std::minmax_element(cloud.tags.begin(), cloud.tags.end(),
                                      [](const Tag& a, const Tag& b) { return a.weight < b.weight; });
  const double w_min = lo->weight;
  const double w_max = hi->weight;
  out.reserve(cloud.size());
  for (const auto& t : cloud.tags) {
    double size = (min_size + max_size) / 2;
    if (w_max > w_min) size = min_size + (t.weight - w_min) / (w_max - w_min) * (max_size - min_size);
    out.push_back(ScaledTag{t, size});
  }
  return out;
}

}  // namespace tagcube
