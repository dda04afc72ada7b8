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

#include "tagcube/layout.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tagcube/error.h"

namespace tagcube {

namespace {

void check_permutation(const LayoutOrder& order, std::size_t n) {
  if (order.size() != n) {
    throw Error(ErrorCode::kPermutationMismatch,
                "order has " + std::to_string(order.size()) + " entries for " + std::to_string(n) + " tags");
  }
  std::vector<char> seen(n, 0);
  for (auto t : order.sequence) {
    if (t >= n || seen[t]) throw Error(ErrorCode::kPermutationMismatch, "not a permutation");
    seen[t] = 1;
  }
}

// A move must beat this to be accepted, so rounding in the running cost can
// never let an accepted move raise the recomputed cost.
double improvement_floor(double cost) { return -1e-12 * std::max(1.0, std::abs(cost)); }

}  // namespace

std::vector<std::size_t> LayoutOrder::positions() const {
  std::vector<std::size_t> pos(sequence.size());
  for (std::size_t p = 0; p < sequence.size(); ++p) pos[sequence[p]] = p;
  return pos;
}

LayoutOrder LayoutOrder::identity(std::size_t n) {
  LayoutOrder o;
  o.sequence.resize(n);
  std::iota(o.sequence.begin(), o.sequence.end(), std::size_t{0});
  return o;
}

double mla_cost(const LayoutOrder& order, const SimilarityMatrix& m) {
  check_permutation(order, m.size());
  const auto& seq = order.sequence;
  double cost = 0;
  for (std::size_t p = 0; p < seq.size(); ++p) {
    for (std::size_t q = p + 1; q < seq.size(); ++q) cost += m(seq[p], seq[q]) * static_cast<double>(q - p);
  }
  return cost;
}

LayoutOrder nn_order_from(const SimilarityMatrix& m, std::size_t start, std::size_t* lookups) {
  const std::size_t n = m.size();
  LayoutOrder order;
  if (n == 0) {
    if (lookups) *lookups = 0;
    return order;
  }
  if (start >= n) throw Error(ErrorCode::kInvalidArgument, "start tag out of range");
  const auto& tags = m.tags();
  std::vector<std::size_t> remaining;
  remaining.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != start) remaining.push_back(i);
  }
  order.sequence.reserve(n);
  order.sequence.push_back(start);
  std::size_t reads = 0;
  while (!remaining.empty()) {
    const std::size_t last = order.sequence.back();
    std::size_t best = 0;
    double best_sim = 0;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      const double s = m(last, remaining[r]);
      ++reads;
      if (r == 0 || s > best_sim ||
          (s == best_sim && tags[remaining[r]].coords < tags[remaining[best]].coords)) {
        best = r;
        best_sim = s;
      }
    }
    order.sequence.push_back(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (lookups) *lookups = reads;
  return order;
}

LayoutOrder nn_order(const SimilarityMatrix& m, std::optional<std::uint64_t> seed, std::size_t* lookups) {
  const std::size_t n = m.size();
  if (n == 0) return nn_order_from(m, 0, lookups);
  std::size_t start = 0;
  if (seed) {
    std::mt19937_64 rng(*seed);
    start = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  } else {
    const auto& tags = m.tags();
    for (std::size_t i = 1; i < n; ++i) {
      if (ranks_before(tags[i].weight, tags[i].coords, tags[start].weight, tags[start].coords)) start = i;
    }
  }
  return nn_order_from(m, start, lookups);
}

LayoutOrder pwmc_order(const LayoutOrder& start, const SimilarityMatrix& m, std::size_t exchanges,
                       std::uint64_t seed) {
  LayoutOrder order = start;
  double cost = mla_cost(order, m);
  const std::size_t n = order.size();
  if (n < 2) return order;
  auto& seq = order.sequence;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_int_distribution<std::size_t> second(0, n - 2);
  for (std::size_t e = 0; e < exchanges; ++e) {
    std::size_t i = first(rng);
    std::size_t j = second(rng);
    if (j >= i) ++j;
    const std::size_t a = seq[i];
    const std::size_t b = seq[j];
    // Only distances between {a, b} and the other n - 2 tags change.
    double delta = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const std::size_t c = seq[k];
      const double di = std::abs(static_cast<double>(i) - static_cast<double>(k));
      const double dj = std::abs(static_cast<double>(j) - static_cast<double>(k));
      delta += (m(a, c) - m(b, c)) * (dj - di);
    }
    if (delta < improvement_floor(cost)) {
      std::swap(seq[i], seq[j]);
      cost += delta;
    }
  }
  return order;
}

LayoutOrder mc_order(const LayoutOrder& start, const SimilarityMatrix& m, std::size_t iterations,
                     std::uint64_t seed) {
  LayoutOrder order = start;
  double cost = mla_cost(order, m);
  const std::size_t n = order.size();
  if (n < 2) return order;
  auto& seq = order.sequence;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cut_at(1, n - 1);
  for (std::size_t it = 0; it < iterations; ++it) {
    const std::size_t cut = cut_at(rng);
    // Swapping blocks [0, cut) and [cut, n) turns each cross distance d into n - d.
    double delta = 0;
    for (std::size_t p = 0; p < cut; ++p) {
      for (std::size_t q = cut; q < n; ++q) {
        const double d = static_cast<double>(q - p);
        delta += m(seq[p], seq[q]) * (static_cast<double>(n) - 2 * d);
      }
    }
    if (delta < improvement_floor(cost)) {
      std::rotate(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(cut), seq.end());
      cost += delta;
    }
  }
  return order;
}

LayoutOrder brute_force_order(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  if (n > kMaxBruteForceTags) {
    throw Error(ErrorCode::kTooLarge, std::to_string(n) + " tags exceeds " + std::to_string(kMaxBruteForceTags));
  }
  LayoutOrder best = LayoutOrder::identity(n);
  if (n < 3) return best;
  double best_cost = mla_cost(best, m);
  LayoutOrder trial = best;
  auto& seq = trial.sequence;
  while (std::next_permutation(seq.begin(), seq.end())) {
    // Reversal leaves the cost unchanged; visit one of each mirror pair.
    if (seq.front() > seq.back()) continue;
    const double c = mla_cost(trial, m);
    if (c < best_cost) {
      best_cost = c;
      best = trial;
    }
  }
  return best;
}

std::vector<HintedItem> emit_hints(const LayoutOrder& order, const SimilarityMatrix& m, double glue_threshold) {
  check_permutation(order, m.size());
  std::vector<HintedItem> out;
  out.reserve(2 * order.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (p > 0 && m(order.sequence[p - 1], order.sequence[p]) >= glue_threshold) {
      out.push_back(HintedItem{std::nullopt, HintToken::kGlued});
    }
    out.push_back(HintedItem{order.sequence[p], HintToken::kGlued});
  }
  return out;
}

}  // namespace tagcube
