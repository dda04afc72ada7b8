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

#include "tagcube/similarity.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "tagcube/error.h"

namespace tagcube {

namespace {

struct Sums {
  double dot = 0;
  double uu = 0;
  double vv = 0;
};

Sums sums(const TagVector& u, const TagVector& v) {
  Sums s;
  for (const auto& [k, x] : u.entries) s.uu += x * x;
  for (const auto& [k, y] : v.entries) s.vv += y * y;
  // Only shared keys contribute to the inner product.
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s.dot += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

void require_nonzero(const TagVector& u, const TagVector& v) {
  if (u.is_zero()) throw Error(ErrorCode::kZeroVector, u.tag.term);
  if (v.is_zero()) throw Error(ErrorCode::kZeroVector, v.tag.term);
}

void check_disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& d : a) {
    if (std::find(b.begin(), b.end(), d) != b.end()) throw Error(ErrorCode::kOverlappingDims, d);
  }
}

}  // namespace

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kCosine: return "COSINE";
    case SimilarityKind::kTanimoto: return "TANIMOTO";
    case SimilarityKind::kJaccard: return "JACCARD";
  }
  return "?";
}

SimilarityKind parse_similarity_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "cosine") return SimilarityKind::kCosine;
  if (s == "tanimoto") return SimilarityKind::kTanimoto;
  if (s == "jaccard") return SimilarityKind::kJaccard;
  throw Error(ErrorCode::kInvalidArgument, "unknown similarity " + std::string(text));
}

bool TagVector::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second == 0; });
}

TagVector tag_vector(std::shared_ptr<const FactTable> table, const Schema& schema, const Tag& tag,
                     const std::vector<std::string>& tag_dims, const std::vector<std::string>& clustering_dims,
                     const Aggregator& agg) {
  check_disjoint(clustering_dims, tag_dims);
  if (tag.coords.size() != tag_dims.size()) {
    throw Error(ErrorCode::kInvalidArgument, "tag has " + std::to_string(tag.coords.size()) +
                                                 " coordinates for " + std::to_string(tag_dims.size()) + " dims");
  }
  std::vector<std::string> dims = tag_dims;
  dims.insert(dims.end(), clustering_dims.begin(), clustering_dims.end());
  Cuboid c = build_cuboid(std::move(table), schema, dims, agg);
  for (std::size_t i = 0; i < tag_dims.size(); ++i) c = slice(c, tag_dims[i], tag.coords[i]);
  TagVector v{tag, {}};
  for (const auto& [coord, state] : c.cells) v.entries.emplace(coord, c.value(state));
  return v;
}

std::vector<TagVector> tag_vectors(const TagCloud& cloud, const Cuboid& joint,
                                   const std::vector<std::string>& clustering_dims) {
  check_disjoint(clustering_dims, cloud.source_dims);
  std::vector<std::size_t> tag_idx;
  std::vector<std::size_t> clust_idx;
  for (const auto& d : cloud.source_dims) tag_idx.push_back(joint.dim_index(d));
  for (const auto& d : clustering_dims) clust_idx.push_back(joint.dim_index(d));

  std::map<Coord, std::size_t> by_coords;
  std::vector<TagVector> out;
  out.reserve(cloud.size());
  for (const auto& t : cloud.tags) {
    by_coords.emplace(t.coords, out.size());
    out.push_back(TagVector{t, {}});
  }
  Coord tag_key(tag_idx.size());
  for (const auto& [coord, state] : joint.cells) {
    for (std::size_t i = 0; i < tag_idx.size(); ++i) tag_key[i] = coord[tag_idx[i]];
    auto it = by_coords.find(tag_key);
    if (it == by_coords.end()) continue;
    Coord key;
    key.reserve(clust_idx.size());
    for (auto i : clust_idx) key.push_back(coord[i]);
    // Distinct joint cells can share a clustering key when joint has extra dims.
    out[it->second].entries[std::move(key)] += joint.value(state);
  }
  return out;
}

double cosine(const TagVector& u, const TagVector& v) {
  require_nonzero(u, v);
  const Sums s = sums(u, v);
  return std::clamp(s.dot / std::sqrt(s.uu * s.vv), -1.0, 1.0);
}

double tanimoto(const TagVector& u, const TagVector& v) {
  require_nonzero(u, v);
  const Sums s = sums(u, v);
  return s.dot / (s.uu + s.vv - s.dot);
}

double jaccard(const TagVector& u, const TagVector& v) {
  std::size_t both = 0;
  std::size_t either = 0;
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  auto skip_zero = [](auto& it, const auto& end) {
    while (it != end && it->second == 0) ++it;
  };
  skip_zero(a, u.entries.end());
  skip_zero(b, v.entries.end());
  while (a != u.entries.end() || b != v.entries.end()) {
    if (b == v.entries.end() || (a != u.entries.end() && a->first < b->first)) {
      ++a;
    } else if (a == u.entries.end() || b->first < a->first) {
      ++b;
    } else {
      ++both;
      ++a;
      ++b;
    }
    ++either;
    skip_zero(a, u.entries.end());
    skip_zero(b, v.entries.end());
  }
  if (either == 0) throw Error(ErrorCode::kBothEmpty, u.tag.term + " / " + v.tag.term);
  return static_cast<double>(both) / static_cast<double>(either);
}

double similarity(SimilarityKind kind, const TagVector& u, const TagVector& v) {
  switch (kind) {
    case SimilarityKind::kCosine: return cosine(u, v);
    case SimilarityKind::kTanimoto: return tanimoto(u, v);
    case SimilarityKind::kJaccard: return jaccard(u, v);
  }
  return 0;
}

SimilarityMatrix::SimilarityMatrix(std::vector<Tag> tags, std::vector<double> values, SimilarityKind kind)
    : tags_(std::move(tags)), values_(std::move(values)), kind_(kind) {
  const std::size_t n = tags_.size();
  if (values_.size() != n * n) throw Error(ErrorCode::kInvalidArgument, "matrix is not n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (values_[i * n + i] != 1.0) throw Error(ErrorCode::kInvalidArgument, "diagonal must be 1");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (values_[i * n + j] != values_[j * n + i]) throw Error(ErrorCode::kInvalidArgument, "matrix is not symmetric");
    }
  }
}

SimilarityMatrix similarity_matrix(const std::vector<TagVector>& vectors, SimilarityKind kind) {
  const std::size_t n = vectors.size();
  std::vector<double> values(n * n, 0.0);
  std::vector<char> zero(n);
  for (std::size_t i = 0; i < n; ++i) zero[i] = vectors[i].is_zero();
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = zero[i] || zero[j] ? 0.0 : similarity(kind, vectors[i], vectors[j]);
      values[i * n + j] = s;
      values[j * n + i] = s;
    }
  }
  std::vector<Tag> tags;
  tags.reserve(n);
  for (const auto& v : vectors) tags.push_back(v.tag);
  return SimilarityMatrix(std::move(tags), std::move(values), kind);
}

SimilarityMatrix similarity_matrix(const TagCloud& cloud, const Cuboid& joint,
                                   const std::vector<std::string>& clustering_dims, SimilarityKind kind) {
  return similarity_matrix(tag_vectors(cloud, joint, clustering_dims), kind);
}

SimilarityMatrix similarity_matrix(const TagCloud& cloud, std::shared_ptr<const FactTable> table,
                                   const Schema& schema, const std::vector<std::string>& clustering_dims,
                                   const Aggregator& agg, SimilarityKind kind) {
  std::vector<std::string> dims = cloud.source_dims;
  dims.insert(dims.end(), clustering_dims.begin(), clustering_dims.end());
  return similarity_matrix(cloud, build_cuboid(std::move(table), schema, dims, agg), clustering_dims, kind);
}

}  // namespace tagcube
