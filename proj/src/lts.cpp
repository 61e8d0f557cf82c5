#include "bqual/lts.hpp"

#include <sstream>

namespace bqual {

namespace {

std::string join_values(std::span<const Value> values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += ',';
    out += values[i].to_string();
  }
  return out + ")";
}

void check_same_variables(const State& pre, const State& post) {
  if (pre.size() != post.size()) throw StructuralError("pre- and post-state bind different variable sets");
  for (const auto& [name, value] : pre.bindings()) {
    if (post.find(name) == nullptr) {
      throw StructuralError("variable '" + name + "' is bound in the pre-state but not the post-state");
    }
  }
}

}  // namespace

State::State(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (bindings_[i].first == bindings_[j].first) {
        throw StructuralError("variable '" + bindings_[i].first + "' bound twice");
      }
    }
  }
}

State State::from_row(const VariableOrder& order, std::span<const Value> row) {
  if (order.size() != row.size()) throw StructuralError("row width does not match the variable order");
  std::vector<Binding> bindings;
  bindings.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) bindings.emplace_back(order[i], row[i]);
  State s;
  s.bindings_ = std::move(bindings);
  return s;
}

const Value* State::find(std::string_view variable) const noexcept {
  for (const auto& [name, value] : bindings_) {
    if (name == variable) return &value;
  }
  return nullptr;
}

const Value& State::at(std::string_view variable) const {
  if (const Value* v = find(variable)) return *v;
  throw StructuralError("state does not bind variable '" + std::string(variable) + "'");
}

std::vector<Value> State::row(const VariableOrder& order) const {
  std::vector<Value> out;
  out.reserve(order.size());
  for (const auto& name : order) {
    const Value* v = find(name);
    if (v == nullptr) throw StructuralError("state is missing variable '" + name + "'");
    out.push_back(*v);
  }
  if (bindings_.size() != order.size()) {
    for (const auto& [name, value] : bindings_) {
      if (std::find(order.begin(), order.end(), name) == order.end()) {
        throw StructuralError("state binds unknown variable '" + name + "'");
      }
    }
  }
  return out;
}

std::string State::to_string() const {
  std::vector<Value> values;
  values.reserve(bindings_.size());
  for (const auto& [name, value] : bindings_) values.push_back(value);
  return join_values(values);
}

std::string Transition::to_string() const {
  return "[" + pre.to_string() + ", " + label + ", " + post.to_string() + "]";
}

std::string StatePair::to_string() const {
  return "[" + pre.to_string() + ", " + post.to_string() + "]";
}

FlatList flatten_transition(const Transition& t, const VariableOrder& order) {
  check_same_variables(t.pre, t.post);
  FlatList out;
  out.reserve(2 * order.size() + 1);
  for (const Value& v : t.pre.row(order)) out.emplace_back(v);
  out.emplace_back(t.label);
  for (const Value& v : t.post.row(order)) out.emplace_back(v);
  return out;
}

FlatList flatten_pair(const StatePair& p, const VariableOrder& order) {
  check_same_variables(p.pre, p.post);
  FlatList out;
  out.reserve(2 * order.size());
  for (const Value& v : p.pre.row(order)) out.emplace_back(v);
  for (const Value& v : p.post.row(order)) out.emplace_back(v);
  return out;
}

std::string to_string(const Token& token) {
  if (const auto* v = std::get_if<Value>(&token)) return v->to_string();
  return std::get<std::string>(token);
}

std::string to_string(const FlatList& list) {
  std::string out = "[";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i != 0) out += ", ";
    out += to_string(list[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------

Universe::Universe(VariableOrder variables)
    : variables_(std::move(variables)), index_(64, RowHash{this}, RowEqual{this}) {
  if (variables_.empty()) throw StructuralError("a universe needs at least one variable");
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (variables_[i] == variables_[j]) throw StructuralError("duplicate variable '" + variables_[i] + "'");
    }
  }
}

std::size_t Universe::RowHash::operator()(std::span<const Value> row) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const Value& v : row) h = (h ^ v.hash()) * 0x100000001b3ULL;
  return h;
}

bool Universe::RowEqual::operator()(std::span<const Value> a, StateId b) const noexcept {
  auto rb = owner->row(b);
  return std::equal(a.begin(), a.end(), rb.begin(), rb.end());
}

StateId Universe::intern(std::span<const Value> row) {
  if (row.size() != arity()) throw StructuralError("row width does not match the universe arity");
  if (auto it = index_.find(row); it != index_.end()) return *it;
  const auto id = static_cast<StateId>(state_count());
  rows_.insert(rows_.end(), row.begin(), row.end());
  index_.insert(id);
  return id;
}

std::optional<StateId> Universe::find(std::span<const Value> row) const {
  if (row.size() != arity()) return std::nullopt;
  if (auto it = index_.find(row); it != index_.end()) return *it;
  return std::nullopt;
}

std::span<const Value> Universe::row(StateId id) const {
  return {rows_.data() + static_cast<std::size_t>(id) * arity(), arity()};
}

LabelId Universe::intern_label(std::string_view label) {
  if (auto it = label_index_.find(std::string(label)); it != label_index_.end()) return it->second;
  const auto id = static_cast<LabelId>(labels_.size());
  labels_.emplace_back(label);
  label_index_.emplace(std::string(label), id);
  return id;
}

std::optional<LabelId> Universe::find_label(std::string_view label) const {
  if (auto it = label_index_.find(std::string(label)); it != label_index_.end()) return it->second;
  return std::nullopt;
}

TransitionKey Universe::intern(const Transition& t) {
  check_same_variables(t.pre, t.post);
  return {intern(t.pre), intern_label(t.label), intern(t.post)};
}

Transition Universe::transition(TransitionKey key) const {
  return {state(key.pre), label(key.label), state(key.post)};
}

// ---------------------------------------------------------------------------

bool TransitionSet::insert(const Transition& t) {
  if (!universe_) throw StructuralError("cannot insert into a transition set without a universe");
  return insert(universe_->intern(t));
}

bool TransitionSet::contains(const Transition& t) const {
  if (!universe_) return false;
  check_same_variables(t.pre, t.post);
  auto pre = universe_->find(t.pre.row(universe_->variables()));
  auto post = universe_->find(t.post.row(universe_->variables()));
  auto label = universe_->find_label(t.label);
  if (!pre || !post || !label) return false;
  return contains(TransitionKey{*pre, *label, *post});
}

std::vector<Transition> TransitionSet::to_transitions() const {
  std::vector<Transition> out;
  out.reserve(size());
  for (const auto& key : keys_) out.push_back(universe_->transition(key));
  return out;
}

bool PairSet::insert(const StatePair& p) {
  if (!universe_) throw StructuralError("cannot insert into a pair set without a universe");
  check_same_variables(p.pre, p.post);
  return insert(PairKey{universe_->intern(p.pre), universe_->intern(p.post)});
}

bool PairSet::contains(const StatePair& p) const {
  if (!universe_) return false;
  check_same_variables(p.pre, p.post);
  auto pre = universe_->find(p.pre.row(universe_->variables()));
  auto post = universe_->find(p.post.row(universe_->variables()));
  if (!pre || !post) return false;
  return contains(PairKey{*pre, *post});
}

std::vector<StatePair> PairSet::to_pairs() const {
  std::vector<StatePair> out;
  out.reserve(size());
  for (const auto& key : keys_) out.push_back(universe_->pair(key));
  return out;
}

void require_same_universe(const std::shared_ptr<Universe>& a, const std::shared_ptr<Universe>& b) {
  if (a && b && a != b) throw StructuralError("set operands belong to different universes");
}

std::size_t set_size(const TransitionSet& set) {
  if (set.empty()) return 0;
  return (2 * set.universe()->arity() + 1) * set.size();
}

std::size_t set_size(const PairSet& set) {
  if (set.empty()) return 0;
  return 2 * set.universe()->arity() * set.size();
}

std::size_t set_size(std::span<const Transition> set, const VariableOrder& order) {
  std::size_t total = 0;
  for (const auto& t : set) total += flatten_transition(t, order).size();
  return total;
}

std::size_t set_size(std::span<const StatePair> set, const VariableOrder& order) {
  std::size_t total = 0;
  for (const auto& p : set) total += flatten_pair(p, order).size();
  return total;
}

PairSet pairs_of(const TransitionSet& set) {
  std::vector<PairKey> keys;
  keys.reserve(set.size());
  for (const auto& k : set) keys.push_back({k.pre, k.post});
  return PairSet(set.universe(), std::move(keys));
}

std::set<std::string> labels_of(const TransitionSet& set) {
  std::vector<bool> seen;
  std::set<std::string> out;
  for (const auto& k : set) {
    if (k.label >= seen.size()) seen.resize(k.label + 1, false);
    if (!seen[k.label]) {
      seen[k.label] = true;
      out.insert(set.universe()->label(k.label));
    }
  }
  return out;
}

TransitionSet without_label(const TransitionSet& set, std::string_view label) {
  if (set.empty()) return set;
  const auto id = set.universe()->find_label(label);
  std::vector<TransitionKey> keys;
  keys.reserve(set.size());
  for (const auto& k : set) {
    if (!id || k.label != *id) keys.push_back(k);
  }
  return TransitionSet(set.universe(), std::move(keys));
}

TransitionSet with_label(const TransitionSet& set, std::string_view label) {
  if (set.empty()) return set;
  const auto id = set.universe()->find_label(label);
  std::vector<TransitionKey> keys;
  if (id) {
    for (const auto& k : set) {
      if (k.label == *id) keys.push_back(k);
    }
  }
  return TransitionSet(set.universe(), std::move(keys));
}

TransitionSet rebase(const TransitionSet& set, const std::shared_ptr<Universe>& target) {
  if (!target) throw StructuralError("rebase needs a target universe");
  if (!set.universe() || set.universe() == target) return TransitionSet(target, set.keys());
  const auto& source = *set.universe();
  if (source.arity() != target->arity()) throw StructuralError("variable sets differ in size");
  std::vector<std::size_t> from(target->arity());
  for (std::size_t i = 0; i < target->arity(); ++i) {
    const auto& name = target->variables()[i];
    auto it = std::find(source.variables().begin(), source.variables().end(), name);
    if (it == source.variables().end()) throw StructuralError("variable '" + name + "' missing from source set");
    from[i] = static_cast<std::size_t>(it - source.variables().begin());
  }
  std::vector<Value> row(target->arity());
  auto map_state = [&](StateId id) {
    auto src = source.row(id);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = src[from[i]];
    return target->intern(row);
  };
  std::vector<TransitionKey> keys;
  keys.reserve(set.size());
  for (const auto& k : set) {
    keys.push_back({map_state(k.pre), target->intern_label(source.label(k.label)), map_state(k.post)});
  }
  return TransitionSet(target, std::move(keys));
}

}  // namespace bqual
