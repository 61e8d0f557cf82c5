#pragma once

// Quality criteria over derived, required and changed transition systems. Every ratio
// is exact; an empty denominator raises MetricError.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bqual/alignment.hpp"
#include "bqual/explorer.hpp"
#include "bqual/lts.hpp"
#include "bqual/machine.hpp"
#include "bqual/rational.hpp"

namespace bqual {

struct RequirementSpec {
  TransitionSet required_transitions;

  PairSet required_pairs() const { return pairs_of(required_transitions); }
  std::set<std::string> required_operations() const { return labels_of(required_transitions); }
};

struct Goal {
  std::string name;
  std::string source;
  PredPtr predicate;
};

struct GoalSpec {
  std::vector<Goal> goals;
};

/// "NAME: predicate" per line; blank lines and lines starting with // are skipped.
/// Predicates resolve against `machine`. Throws SyntaxError (line-located) or InputError.
GoalSpec parse_goals(std::string_view text, const MachineAST& machine);

// functional suitability
Ratio tfcomp(const TransitionSet& derived, const TransitionSet& required);
Ratio pfcomp(const TransitionSet& derived, const TransitionSet& required, const AlignmentOptions& options = {});
Ratio tfcorr(const TransitionSet& derived, const TransitionSet& required);
Ratio pfcorr(const TransitionSet& derived, const TransitionSet& required, const AlignmentOptions& options = {});
Ratio tfappr(const TransitionSet& derived, const TransitionSet& required);
Ratio pfappr(const TransitionSet& derived, const TransitionSet& required, const AlignmentOptions& options = {});

// security and reliability
Ratio invariant_satisfiability(const ExplorationResult& result);
Ratio availability(const ExplorationResult& result, const std::set<std::string>& required_operations);
Ratio availability(const TransitionSet& transitions, const TransitionSet& violating,
                   const std::set<std::string>& required_operations);
/// States with at most one ingoing transition over all states.
Ratio accountability(const ExplorationResult& result);
Ratio accountability(std::span<const StateId> states, const TransitionSet& transitions);
Ratio fault_tolerance(const TransitionSet& u_changed, const TransitionSet& u_violating);
Ratio recoverability(const TransitionSet& u_ok, const TransitionSet& derived);

// maintainability
Ratio functional_analysability(const TransitionSet& derived, const TransitionSet& u_changed);
/// 0 when both sets are empty.
Ratio fault_analysability(const TransitionSet& derived_violating, const TransitionSet& u_violating);
Ratio modularity_of(std::string_view operation, const TransitionSet& derived, const TransitionSet& delta);
/// Throws MetricError when a label of `derived` has no entry.
Ratio weighted_modularity(const std::map<std::string, Ratio>& per_operation, const TransitionSet& derived);
Ratio reusability(const TransitionSet& derived);

// performance and usability
std::uint64_t capacity(const ExplorationResult& result);
Ratio goal_appropriateness(const Model& model, const ExplorationResult& result, const GoalSpec& goals);
Ratio learnability(std::uint64_t n_words, std::int64_t n_limit);


/// A metric that is either a value or the reason it could not be computed.
struct MetricValue {
  std::optional<Ratio> value;
  std::string reason;

  bool computed() const noexcept { return value.has_value(); }
  static MetricValue missing(std::string why) { return {std::nullopt, std::move(why)}; }
};

/// Runs `f`, turning MetricError and AlignmentSizeError into a not-computed value.
template <class F>
MetricValue attempt(F&& f) {
  try {
    return {f(), {}};
  } catch (const MetricError& e) {
    return MetricValue::missing(e.what());
  } catch (const AlignmentSizeError& e) {
    return MetricValue::missing(e.what());
  }
}

}  // namespace bqual
