#include "bqual/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace bqual {

std::size_t agreement(const FlatList& a, const FlatList& b) {
  if (a.size() != b.size()) {
    throw StructuralError("cannot align lists of length " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] == b[i] ? 1 : 0;
  return n;
}

std::size_t max_weight_matching(std::size_t rows, std::size_t cols, std::size_t max_weight,
                                const std::function<std::size_t(std::size_t, std::size_t)>& weight,
                                std::vector<std::pair<std::size_t, std::size_t>>* chosen) {
  if (rows == 0 || cols == 0) return 0;
  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;
  const std::size_t m = transpose ? rows : cols;
  const auto top = static_cast<std::int64_t>(max_weight);

  // Minimise max_weight - weight over full assignments of the smaller side; with
  // non-negative weights this is the maximum-weight partial matching.
  constexpr std::size_t dense_limit = std::size_t{1} << 24;
  std::vector<std::int32_t> dense;
  if (n * m <= dense_limit && max_weight <= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    dense.resize(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t w = transpose ? weight(j, i) : weight(i, j);
        dense[i * m + j] = static_cast<std::int32_t>(top - static_cast<std::int64_t>(w));
      }
    }
  }
  auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
    if (!dense.empty()) return dense[i * m + j];
    const std::size_t w = transpose ? weight(j, i) : weight(i, j);
    return top - static_cast<std::int64_t>(w);
  };

  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0);
  std::vector<std::int64_t> v(m + 1, 0);
  std::vector<std::size_t> owner(m + 1, 0);  // column -> row (1-based), 0 = free
  std::vector<std::size_t> way(m + 1, 0);
  std::vector<std::int64_t> minv(m + 1);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      std::int64_t delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j] != 0) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j] != 0) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::size_t total = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] == 0) continue;
    const std::size_t r = transpose ? j - 1 : owner[j] - 1;
    const std::size_t c = transpose ? owner[j] - 1 : j - 1;
    const std::size_t w = weight(r, c);
    total += w;
    if (chosen != nullptr && w > 0) chosen->emplace_back(r, c);
  }
  if (chosen != nullptr) std::sort(chosen->begin(), chosen->end());
  return total;
}

namespace {

/// Shared driver: pre-match identical elements, then solve the remainder exactly.
/// `identical` lists (left, right) index pairs of equal elements; `less` orders
/// elements canonically; `weight` is the positional agreement.
template <class Element, class Less, class Weight>
AlignmentOutcome<Element> align(std::vector<Element> left_rest, std::vector<Element> right_rest,
                                const std::vector<Element>& identical, std::size_t length, Less less,
                                Weight weight, const AlignmentOptions& options) {
  AlignmentOutcome<Element> out;
  for (const auto& e : identical) {
    out.total_agreement += length;
    if (length > 0) out.matching.push_back({e, e, length});
  }
  if (left_rest.size() > options.size_threshold && right_rest.size() > options.size_threshold) {
    throw AlignmentSizeError("alignment remainder of " + std::to_string(left_rest.size()) + " x " +
                             std::to_string(right_rest.size()) + " elements exceeds the threshold of " +
                             std::to_string(options.size_threshold));
  }
  std::sort(left_rest.begin(), left_rest.end(), less);
  std::sort(right_rest.begin(), right_rest.end(), less);
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  out.total_agreement += max_weight_matching(
      left_rest.size(), right_rest.size(), length,
      [&](std::size_t i, std::size_t j) { return weight(left_rest[i], right_rest[j]); }, &chosen);
  for (auto [i, j] : chosen) out.matching.push_back({left_rest[i], right_rest[j], weight(left_rest[i], right_rest[j])});
  return out;
}

std::size_t row_agreement(const Universe& u, StateId a, StateId b) {
  if (a == b) return u.arity();
  auto ra = u.row(a);
  auto rb = u.row(b);
  std::size_t n = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) n += ra[i] == rb[i] ? 1 : 0;
  return n;
}

bool row_less(const Universe& u, StateId a, StateId b) {
  if (a == b) return false;
  auto ra = u.row(a);
  auto rb = u.row(b);
  return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
}

bool row_equal(const Universe& u, StateId a, StateId b) { return a == b || row_agreement(u, a, b) == u.arity(); }

template <class Set>
void split(const Set& left, const Set& right, std::vector<typename Set::key_type>& identical,
           std::vector<typename Set::key_type>& left_rest, std::vector<typename Set::key_type>& right_rest) {
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(identical));
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(left_rest));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(), std::back_inserter(right_rest));
}

}  // namespace

AlignmentOutcome<TransitionKey> similarity(const TransitionSet& left, const TransitionSet& right,
                                           const AlignmentOptions& options) {
  require_same_universe(left.universe(), right.universe());
  const auto& universe = left.universe() ? left.universe() : right.universe();
  if (!universe) return {};
  const Universe& u = *universe;
  std::vector<TransitionKey> identical;
  std::vector<TransitionKey> left_rest;
  std::vector<TransitionKey> right_rest;
  split(left, right, identical, left_rest, right_rest);
  auto less = [&u](const TransitionKey& a, const TransitionKey& b) {
    if (!row_equal(u, a.pre, b.pre)) return row_less(u, a.pre, b.pre);
    if (a.label != b.label) return u.label(a.label) < u.label(b.label);
    return row_less(u, a.post, b.post);
  };
  auto weight = [&u](const TransitionKey& a, const TransitionKey& b) {
    return row_agreement(u, a.pre, b.pre) + (a.label == b.label ? 1 : 0) + row_agreement(u, a.post, b.post);
  };
  return align(std::move(left_rest), std::move(right_rest), identical, 2 * u.arity() + 1, less, weight, options);
}

AlignmentOutcome<PairKey> similarity(const PairSet& left, const PairSet& right, const AlignmentOptions& options) {
  require_same_universe(left.universe(), right.universe());
  const auto& universe = left.universe() ? left.universe() : right.universe();
  if (!universe) return {};
  const Universe& u = *universe;
  std::vector<PairKey> identical;
  std::vector<PairKey> left_rest;
  std::vector<PairKey> right_rest;
  split(left, right, identical, left_rest, right_rest);
  auto less = [&u](const PairKey& a, const PairKey& b) {
    if (!row_equal(u, a.pre, b.pre)) return row_less(u, a.pre, b.pre);
    return row_less(u, a.post, b.post);
  };
  auto weight = [&u](const PairKey& a, const PairKey& b) {
    return row_agreement(u, a.pre, b.pre) + row_agreement(u, a.post, b.post);
  };
  return align(std::move(left_rest), std::move(right_rest), identical, 2 * u.arity(), less, weight, options);
}

AlignmentOutcome<std::size_t> similarity(std::span<const FlatList> left, std::span<const FlatList> right,
                                         const AlignmentOptions& options) {
  std::size_t length = 0;
  bool first = true;
  for (const auto* side : {&left, &right}) {
    for (const auto& list : *side) {
      if (first) {
        length = list.size();
        first = false;
      } else if (list.size() != length) {
        throw StructuralError("mixed element kinds: flattened lengths " + std::to_string(length) + " and " +
                              std::to_string(list.size()));
      }
    }
  }

  auto less_index = [](std::span<const FlatList> side) {
    return [side](std::size_t a, std::size_t b) { return side[a] < side[b] || (side[a] == side[b] && a < b); };
  };
  std::vector<std::size_t> li(left.size());
  std::vector<std::size_t> ri(right.size());
  std::iota(li.begin(), li.end(), 0);
  std::iota(ri.begin(), ri.end(), 0);
  std::sort(li.begin(), li.end(), less_index(left));
  std::sort(ri.begin(), ri.end(), less_index(right));

  AlignmentOutcome<std::size_t> out;
  std::vector<std::size_t> left_rest;
  std::vector<std::size_t> right_rest;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < li.size() && b < ri.size()) {
    const auto& x = left[li[a]];
    const auto& y = right[ri[b]];
    if (x < y) {
      left_rest.push_back(li[a++]);
    } else if (y < x) {
      right_rest.push_back(ri[b++]);
    } else {
      out.total_agreement += length;
      if (length > 0) out.matching.push_back({li[a], ri[b], length});
      ++a;
      ++b;
    }
  }
  left_rest.insert(left_rest.end(), li.begin() + static_cast<std::ptrdiff_t>(a), li.end());
  right_rest.insert(right_rest.end(), ri.begin() + static_cast<std::ptrdiff_t>(b), ri.end());

  if (left_rest.size() > options.size_threshold && right_rest.size() > options.size_threshold) {
    throw AlignmentSizeError("alignment remainder exceeds the threshold of " + std::to_string(options.size_threshold));
  }
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  auto weight = [&](std::size_t i, std::size_t j) { return agreement(left[left_rest[i]], right[right_rest[j]]); };
  out.total_agreement += max_weight_matching(left_rest.size(), right_rest.size(), length, weight, &chosen);
  for (auto [i, j] : chosen) out.matching.push_back({left_rest[i], right_rest[j], weight(i, j)});
  return out;
}

}  // namespace bqual
