#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "bqual/lts.hpp"

// Exhaustive maximum over every injective partial matching.
inline std::size_t brute_force_similarity(const std::vector<bqual::FlatList>& left,
                                          const std::vector<bqual::FlatList>& right) {
  std::vector<bool> used(right.size(), false);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
    if (i == left.size()) return 0;
    std::size_t best = go(i + 1);
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (used[j]) continue;
      std::size_t agree = 0;
      for (std::size_t k = 0; k < left[i].size(); ++k) agree += left[i][k] == right[j][k] ? 1 : 0;
      used[j] = true;
      best = std::max(best, agree + go(i + 1));
      used[j] = false;
    }
    return best;
  };
  return go(0);
}

// Random transition set over a tiny alphabet so that agreements are frequent.
inline std::vector<bqual::Transition> random_transitions(std::mt19937_64& rng, std::size_t max_size,
                                                         std::int64_t values, int labels) {
  std::uniform_int_distribution<std::size_t> size(0, max_size);
  std::uniform_int_distribution<std::int64_t> value(0, values - 1);
  std::uniform_int_distribution<int> label(0, labels - 1);
  auto state = [&] {
    return bqual::State({{"x", bqual::Value::integer(value(rng))}, {"y", bqual::Value::integer(value(rng))}});
  };
  std::vector<bqual::Transition> out;
  const auto n = size(rng);
  for (std::size_t i = 0; i < n; ++i) {
    bqual::Transition t{state(), std::string(1, static_cast<char>('a' + label(rng))), state()};
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
  }
  return out;
}
