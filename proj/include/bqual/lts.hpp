#pragma once

// Core value types of a labelled transition system and the flattening/size primitives
// the metrics are computed over.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "bqual/errors.hpp"
#include "bqual/value.hpp"

namespace bqual {

/// Variable names in VARIABLES-clause declaration order.
using VariableOrder = std::vector<std::string>;

/// Total assignment of machine variables to values, kept in declaration order.
class State {
 public:
  using Binding = std::pair<std::string, Value>;

  State() = default;
  explicit State(std::vector<Binding> bindings);
  static State from_row(const VariableOrder& order, std::span<const Value> row);

  const std::vector<Binding>& bindings() const noexcept { return bindings_; }
  std::size_t size() const noexcept { return bindings_.size(); }

  const Value* find(std::string_view variable) const noexcept;
  const Value& at(std::string_view variable) const;

  /// Values laid out in `order`; throws StructuralError naming any missing or extra variable.
  std::vector<Value> row(const VariableOrder& order) const;

  /// `(1,59)`
  std::string to_string() const;

  bool operator==(const State&) const = default;
  auto operator<=>(const State&) const = default;

 private:
  std::vector<Binding> bindings_;
};

struct Transition {
  State pre;
  std::string label;
  State post;

  std::string to_string() const;
  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;
};

struct StatePair {
  State pre;
  State post;

  std::string to_string() const;
  bool operator==(const StatePair&) const = default;
  auto operator<=>(const StatePair&) const = default;
};

/// One element of a flattened transition: a state value or an operation label.
using Token = std::variant<Value, std::string>;
using FlatList = std::vector<Token>;

/// [pre-values..., label, post-values...], length 2N+1.
FlatList flatten_transition(const Transition& t, const VariableOrder& order);
/// [pre-values..., post-values...], length 2N.
FlatList flatten_pair(const StatePair& p, const VariableOrder& order);

std::string to_string(const Token& token);
std::string to_string(const FlatList& list);

// ---------------------------------------------------------------------------
// Interned representation

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

struct TransitionKey {
  StateId pre = 0;
  LabelId label = 0;
  StateId post = 0;
  auto operator<=>(const TransitionKey&) const = default;
};

struct PairKey {
  StateId pre = 0;
  StateId post = 0;
  auto operator<=>(const PairKey&) const = default;
};

/// Interning table for the states and labels of one evaluation. Every TransitionSet and
/// PairSet is expressed relative to a Universe; set algebra requires a shared universe.
///
/// A universe needs at least one variable. Interning is single-writer; once populated,
/// concurrent readers are safe.
class Universe {
 public:
  explicit Universe(VariableOrder variables);
  Universe(const Universe&) = delete;
  Universe& operator=(const Universe&) = delete;

  const VariableOrder& variables() const noexcept { return variables_; }
  std::size_t arity() const noexcept { return variables_.size(); }

  StateId intern(std::span<const Value> row);
  StateId intern(const State& state) { return intern(state.row(variables_)); }
  std::optional<StateId> find(std::span<const Value> row) const;
  std::span<const Value> row(StateId id) const;
  State state(StateId id) const { return State::from_row(variables_, row(id)); }
  std::size_t state_count() const noexcept { return rows_.size() / arity(); }

  LabelId intern_label(std::string_view label);
  std::optional<LabelId> find_label(std::string_view label) const;
  const std::string& label(LabelId id) const { return labels_.at(id); }
  std::size_t label_count() const noexcept { return labels_.size(); }

  TransitionKey intern(const Transition& t);
  Transition transition(TransitionKey key) const;
  StatePair pair(PairKey key) const { return {state(key.pre), state(key.post)}; }

 private:
  struct RowHash {
    using is_transparent = void;
    const Universe* owner;
    std::size_t operator()(StateId id) const noexcept { return (*this)(owner->row(id)); }
    std::size_t operator()(std::span<const Value> row) const noexcept;
  };
  struct RowEqual {
    using is_transparent = void;
    const Universe* owner;
    bool operator()(StateId a, StateId b) const noexcept { return a == b; }
    bool operator()(std::span<const Value> a, StateId b) const noexcept;
    bool operator()(StateId a, std::span<const Value> b) const noexcept { return (*this)(b, a); }
  };

  VariableOrder variables_;
  std::vector<Value> rows_;
  std::unordered_set<StateId, RowHash, RowEqual> index_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelId> label_index_;
};

/// Duplicate-free set of interned keys, stored sorted. Iteration order is key order.
template <class Key>
class KeySet {
 public:
  using key_type = Key;
  using const_iterator = typename std::vector<Key>::const_iterator;

  KeySet() = default;
  explicit KeySet(std::shared_ptr<Universe> universe) : universe_(std::move(universe)) {}
  KeySet(std::shared_ptr<Universe> universe, std::vector<Key> keys)
      : universe_(std::move(universe)), keys_(std::move(keys)) {
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  }

  const std::shared_ptr<Universe>& universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  const_iterator begin() const noexcept { return keys_.begin(); }
  const_iterator end() const noexcept { return keys_.end(); }
  const std::vector<Key>& keys() const noexcept { return keys_; }

  bool contains(const Key& key) const { return std::binary_search(keys_.begin(), keys_.end(), key); }

  /// Returns false when the key was already present.
  bool insert(const Key& key) {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it != keys_.end() && *it == key) return false;
    keys_.insert(it, key);
    return true;
  }

  bool erase(const Key& key) {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return false;
    keys_.erase(it);
    return true;
  }

  bool operator==(const KeySet& other) const { return keys_ == other.keys_; }

 protected:
  std::shared_ptr<Universe> universe_;
  std::vector<Key> keys_;
};

class TransitionSet : public KeySet<TransitionKey> {
 public:
  using KeySet::KeySet;
  using KeySet::contains;
  using KeySet::insert;

  bool insert(const Transition& t);
  /// Value-level lookup; never interns.
  bool contains(const Transition& t) const;
  std::vector<Transition> to_transitions() const;
};

class PairSet : public KeySet<PairKey> {
 public:
  using KeySet::KeySet;
  using KeySet::contains;
  using KeySet::insert;

  bool insert(const StatePair& p);
  bool contains(const StatePair& p) const;
  std::vector<StatePair> to_pairs() const;
};

/// Throws StructuralError unless both sets live in the same universe. A set without a
/// universe (default-constructed, necessarily empty) is compatible with any universe.
void require_same_universe(const std::shared_ptr<Universe>& a, const std::shared_ptr<Universe>& b);

template <class Set>
Set set_intersection(const Set& a, const Set& b) {
  require_same_universe(a.universe(), b.universe());
  std::vector<typename Set::key_type> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Set(a.universe(), std::move(out));
}

template <class Set>
Set set_union(const Set& a, const Set& b) {
  require_same_universe(a.universe(), b.universe());
  std::vector<typename Set::key_type> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Set(a.universe() ? a.universe() : b.universe(), std::move(out));
}

template <class Set>
Set set_difference(const Set& a, const Set& b) {
  require_same_universe(a.universe(), b.universe());
  std::vector<typename Set::key_type> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Set(a.universe(), std::move(out));
}

template <class Set>
std::size_t intersection_size(const Set& a, const Set& b) {
  require_same_universe(a.universe(), b.universe());
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

template <class Set>
std::size_t union_size(const Set& a, const Set& b) {
  return a.size() + b.size() - intersection_size(a, b);
}

/// Sum of flattened lengths: (2N+1)·|T|.
std::size_t set_size(const TransitionSet& set);
/// 2N·|P|.
std::size_t set_size(const PairSet& set);
/// Flattens every element under `order`; throws on variable mismatch.
std::size_t set_size(std::span<const Transition> set, const VariableOrder& order);
std::size_t set_size(std::span<const StatePair> set, const VariableOrder& order);

/// Label-erasing projection.
PairSet pairs_of(const TransitionSet& set);
std::set<std::string> labels_of(const TransitionSet& set);

/// Transitions whose label differs from `label`.
TransitionSet without_label(const TransitionSet& set, std::string_view label);
/// Transitions carrying `label`.
TransitionSet with_label(const TransitionSet& set, std::string_view label);

/// Re-expresses `set` in `target`, interning any missing states and labels. Variables are
/// matched by name; a differing variable set is a StructuralError.
TransitionSet rebase(const TransitionSet& set, const std::shared_ptr<Universe>& target);

}  // namespace bqual
