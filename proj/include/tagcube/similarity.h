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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tagcube/cube.h"
#include "tagcube/tagcloud.h"

namespace tagcube {

enum class SimilarityKind { kCosine, kTanimoto, kJaccard };

std::string_view to_string(SimilarityKind kind);
SimilarityKind parse_similarity_kind(std::string_view text);

/// A tag's subcuboid flattened over the clustering coordinates. Absent
/// coordinates are zero.
struct TagVector {
  Tag tag;
  std::map<Coord, double> entries;

  bool is_zero() const;
};

/// Subcuboid of one tag, computed from all facts: the cuboid over
/// tag_dims + clustering_dims sliced at the tag's coords.
/// Throws OverlappingDims, UnknownDimension.
TagVector tag_vector(std::shared_ptr<const FactTable> table, const Schema& schema, const Tag& tag,
                     const std::vector<std::string>& tag_dims, const std::vector<std::string>& clustering_dims,
                     const Aggregator& agg);

/// Vectors for every tag of `cloud` out of one joint cuboid whose dims
/// contain cloud.source_dims and clustering_dims (facts or iceberg alike).
std::vector<TagVector> tag_vectors(const TagCloud& cloud, const Cuboid& joint,
                                   const std::vector<std::string>& clustering_dims);

/// Sums run over the union of coordinate keys. Throw ZeroVector.
double cosine(const TagVector& u, const TagVector& v);
double tanimoto(const TagVector& u, const TagVector& v);
/// Support-set overlap. Throws BothEmpty.
double jaccard(const TagVector& u, const TagVector& v);
double similarity(SimilarityKind kind, const TagVector& u, const TagVector& v);

/// Symmetric pairwise similarities with a unit diagonal.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  /// Validates shape, symmetry and the unit diagonal.
  SimilarityMatrix(std::vector<Tag> tags, std::vector<double> values, SimilarityKind kind);

  std::size_t size() const { return tags_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * tags_.size() + j]; }
  const std::vector<Tag>& tags() const { return tags_; }
  const std::vector<double>& values() const { return values_; }
  SimilarityKind kind() const { return kind_; }

 private:
  std::vector<Tag> tags_;
  std::vector<double> values_;
  SimilarityKind kind_ = SimilarityKind::kCosine;
};

/// Zero-vector tags get similarity 0 to every other tag.
SimilarityMatrix similarity_matrix(const std::vector<TagVector>& vectors, SimilarityKind kind);
SimilarityMatrix similarity_matrix(const TagCloud& cloud, const Cuboid& joint,
                                   const std::vector<std::string>& clustering_dims, SimilarityKind kind);
SimilarityMatrix similarity_matrix(const TagCloud& cloud, std::shared_ptr<const FactTable> table,
                                   const Schema& schema, const std::vector<std::string>& clustering_dims,
                                   const Aggregator& agg, SimilarityKind kind);

}  // namespace tagcube
