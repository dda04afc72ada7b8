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
#include <optional>
#include <vector>

#include "tagcube/similarity.h"

namespace tagcube {

/// `sequence[pos]` is the tag index shown at list position `pos`.
struct LayoutOrder {
  std::vector<std::size_t> sequence;

  std::size_t size() const { return sequence.size(); }
  /// Inverse permutation: tag index -> position.
  std::vector<std::size_t> positions() const;
  static LayoutOrder identity(std::size_t n);

  friend bool operator==(const LayoutOrder&, const LayoutOrder&) = default;
};

/// Sum over unordered pairs of similarity times index distance.
/// Throws PermutationMismatch unless `order` is a permutation of m's tags.
double mla_cost(const LayoutOrder& order, const SimilarityMatrix& m);

/// Greedy chain: repeatedly append the remaining tag most similar to the
/// last one (ties by coords). Without a seed the chain starts at the
/// heaviest tag; with one, at a seeded uniform pick. `lookups`, when given,
/// receives the number of similarity reads.
LayoutOrder nn_order(const SimilarityMatrix& m, std::optional<std::uint64_t> seed = std::nullopt,
                     std::size_t* lookups = nullptr);
LayoutOrder nn_order_from(const SimilarityMatrix& m, std::size_t start, std::size_t* lookups = nullptr);

/// Pairwise-exchange Monte Carlo: `exchanges` proposals of a uniform random
/// position pair, each applied only if it lowers the cost.
LayoutOrder pwmc_order(const LayoutOrder& start, const SimilarityMatrix& m, std::size_t exchanges,
                       std::uint64_t seed);

/// Block Monte Carlo: `iterations` proposals to cut at a uniform random
/// point and swap the two blocks, each applied only if it lowers the cost.
LayoutOrder mc_order(const LayoutOrder& start, const SimilarityMatrix& m, std::size_t iterations,
                     std::uint64_t seed);

inline constexpr std::size_t kMaxBruteForceTags = 9;

/// Exhaustive minimum. Throws TooLarge above kMaxBruteForceTags.
LayoutOrder brute_force_order(const SimilarityMatrix& m);

enum class HintToken { kGlued, kPermutable };

/// Element of the hinted wire list: either a tag index or a token.
struct HintedItem {
  std::optional<std::size_t> tag;
  HintToken token = HintToken::kGlued;

  bool is_token() const { return !tag.has_value(); }
  friend bool operator==(const HintedItem&, const HintedItem&) = default;
};

/// Tags in `order` with a GLUED token between neighbours whose similarity
/// is at least `glue_threshold`. PERMUTABLE is never emitted.
std::vector<HintedItem> emit_hints(const LayoutOrder& order, const SimilarityMatrix& m, double glue_threshold);

}  // namespace tagcube
