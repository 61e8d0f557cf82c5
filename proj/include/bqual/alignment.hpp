#pragma once

// Maximum one-to-one alignment between two sets of flattened transitions (or state
// pairs). Two flattened lists agree on every position holding equal tokens; the
// similarity of two sets is the largest total agreement over all partial matchings in
// which each element is used at most once.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bqual/lts.hpp"

namespace bqual {

struct AlignmentOptions {
  /// Complexity guard: fail when both unmatched remainders exceed this many elements.
  std::size_t size_threshold = 5000;
};

template <class Element>
struct Match {
  Element left;
  Element right;
  std::size_t weight = 0;
};

template <class Element>
struct AlignmentOutcome {
  std::size_t total_agreement = 0;
  /// Positive-weight matches only; zero-weight alignments contribute nothing.
  std::vector<Match<Element>> matching;
};

/// Positional agreement; throws StructuralError when lengths differ.
std::size_t agreement(const FlatList& a, const FlatList& b);

AlignmentOutcome<TransitionKey> similarity(const TransitionSet& left, const TransitionSet& right,
                                           const AlignmentOptions& options = {});
AlignmentOutcome<PairKey> similarity(const PairSet& left, const PairSet& right,
                                     const AlignmentOptions& options = {});
/// Elements are identified by index into `left` / `right`. All lists must share one length.
AlignmentOutcome<std::size_t> similarity(std::span<const FlatList> left, std::span<const FlatList> right,
                                         const AlignmentOptions& options = {});

/// Exact maximum-weight bipartite matching (Hungarian method on the dense matrix).
/// `weight(i, j)` must lie in [0, max_weight]. Returns the total and the chosen pairs,
/// omitting zero-weight ones.
std::size_t max_weight_matching(std::size_t rows, std::size_t cols, std::size_t max_weight,
                                const std::function<std::size_t(std::size_t, std::size_t)>& weight,
                                std::vector<std::pair<std::size_t, std::size_t>>* chosen = nullptr);

}  // namespace bqual
