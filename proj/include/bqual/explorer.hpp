#pragma once

// Bounded explicit-state exploration of a machine into a labelled transition system.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bqual/lts.hpp"
#include "bqual/machine.hpp"

namespace bqual {

/// A finite, non-empty value domain.
class Domain {
 public:
  struct Interval {
    std::int64_t low;
    std::int64_t high;
  };
  struct Boolean {};
  struct Enumerated {
    std::string set;
    std::vector<std::string> elements;
  };

  static Domain interval(std::int64_t low, std::int64_t high);
  static Domain boolean() { return Domain(Boolean{}); }
  static Domain enumerated(std::string set, std::vector<std::string> elements);

  std::uint64_t size() const noexcept;
  /// The index-th value in ascending order.
  Value at(std::uint64_t index) const;
  bool contains(const Value& v) const;
  std::string to_string() const;

  const std::variant<Interval, Boolean, Enumerated>& shape() const noexcept { return shape_; }

 private:
  explicit Domain(std::variant<Interval, Boolean, Enumerated> shape) : shape_(std::move(shape)) {}
  std::variant<Interval, Boolean, Enumerated> shape_;
};

/// One domain per machine variable, in declaration order.
struct DomainMap {
  VariableOrder variables;
  std::vector<Domain> domains;

  const Domain& at(std::string_view variable) const;
  /// Size of the Cartesian product, saturating at UINT64_MAX.
  std::uint64_t product_size() const noexcept;
};

/// Reads each variable's domain off the first top-level membership conjunct of the
/// invariant that mentions it. Throws DomainError.
DomainMap infer_domains(const MachineAST& ast);

using Row = std::vector<Value>;

/// A parsed machine prepared for evaluation: domains inferred, ANY binders resolved.
class Model {
 public:
  explicit Model(MachineAST ast);

  const MachineAST& ast() const noexcept { return ast_; }
  const DomainMap& domains() const noexcept { return domains_; }
  const VariableOrder& variables() const noexcept { return ast_.variables; }

  /// Distinct states produced by INITIALISATION, in first-derivation order.
  std::vector<Row> initial_rows() const;
  /// Distinct post-states of `sub` from `state` (machine declaration order), sorted.
  std::vector<Row> successors(const Substitution& sub, std::span<const Value> state) const;
  bool holds(const Predicate& p, std::span<const Value> state) const;
  bool satisfies_invariant(std::span<const Value> state) const { return holds(*ast_.invariant, state); }

 private:
  friend class Evaluator;
  MachineAST ast_;
  DomainMap domains_;
  std::unordered_map<const Substitution*, std::vector<Domain>> binder_domains_;
};

/// All post-states of `sub` from `state`.
std::vector<State> enumerate_substitution(const Model& model, const Substitution& sub, const State& state);

struct ExplorationLimits {
  std::size_t max_states = 100'000;
  std::size_t max_transitions = 5'000'000;
};

struct Metering {
  double cpu_seconds = 0.0;
  std::uint64_t peak_memory_bytes = 0;
};

struct ExplorationResult {
  std::shared_ptr<Universe> universe;
  std::vector<StateId> initial_states;   // sorted
  std::vector<StateId> states;           // S_derived, sorted
  TransitionSet transitions;             // T_derived
  TransitionSet violating;               // T_derived^bot
  TransitionSet ok;                      // T_derived^top
  std::vector<StateId> deadlock_states;  // non-violating states with no outgoing transition, sorted
  std::vector<StateId> invariant_violating_states;  // sorted
  bool truncated = false;
  Metering metering;

  const VariableOrder& variables() const { return universe->variables(); }
};

/// Breadth-first derivation from the initial states. Invariant-violating states are
/// recorded but never expanded. A transition is violating when its post-state breaks the
/// invariant or has no outgoing transition. When `universe` is given, states are interned
/// there (variables matched by name); otherwise a fresh universe is created.
ExplorationResult explore(const Model& model, const ExplorationLimits& limits = {},
                          std::shared_ptr<Universe> universe = nullptr);

/// True iff some derived state satisfies `goal`.
bool check_goal(const Model& model, const ExplorationResult& result, const Predicate& goal);

/// Invariant test over states of `universe`, which must bind the model's variables.
std::function<bool(StateId)> invariant_oracle(const Model& model, const Universe& universe);

/// Samples peak resident memory on a background thread while alive.
class MemorySampler {
 public:
  explicit MemorySampler(unsigned interval_ms = 5);
  ~MemorySampler();
  MemorySampler(const MemorySampler&) = delete;
  MemorySampler& operator=(const MemorySampler&) = delete;

  std::uint64_t peak_bytes() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Current resident set size of the process, 0 when unavailable.
std::uint64_t resident_bytes();
/// CPU time consumed by the process so far.
double process_cpu_seconds();

}  // namespace bqual
