#pragma once

// Transition-level fault injection: extra and missing transitions, recomputed
// reachability, and the masked changed system the reliability and maintainability
// metrics are read from.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "bqual/explorer.hpp"
#include "bqual/lts.hpp"
#include "bqual/metrics.hpp"

namespace bqual {

/// mt19937_64 with a bounded sampler whose output does not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct MutationCounts {
  std::size_t n_extra = 0;
  std::size_t n_missing = 0;
};

/// max(1, ceil(|transitions| / 100)) for both kinds; zero for an empty set.
MutationCounts default_counts(std::size_t transitions);

struct MutationPlan {
  TransitionSet extra;
  TransitionSet missing;
  std::optional<std::string> label_scope;
  std::uint64_t seed = 0;
  MutationCounts counts;
};

struct ChangedSystem {
  TransitionSet t_changed;
  TransitionSet u_changed;
  TransitionSet u_ok;
  TransitionSet u_violating;
};

/// Samples a plan. Missing transitions come first, uniformly without replacement from the
/// derived transitions (restricted to `label_scope`). Each extra takes a derived pre-state,
/// a label from `labels` (or the scope) and a post-state from the domain product, all
/// uniform, redrawing duplicates. Throws PlanError on unsatisfiable counts.
MutationPlan generate_plan(const ExplorationResult& result, const DomainMap& domains,
                           const std::set<std::string>& labels, MutationCounts counts, std::uint64_t seed,
                           const std::optional<std::string>& label_scope = std::nullopt);

/// Throws PlanError unless extra is disjoint from the derived set, missing is inside it,
/// and both honour the label scope.
void validate_plan(const ExplorationResult& result, const MutationPlan& plan);

/// `satisfies` tells whether a state of the result's universe satisfies the invariant.
ChangedSystem apply_plan(const ExplorationResult& result, const MutationPlan& plan,
                         const std::function<bool(StateId)>& satisfies);
ChangedSystem apply_plan(const Model& model, const ExplorationResult& result, const MutationPlan& plan);

struct ChangeMetrics {
  MetricValue fault_tolerance;
  MetricValue recoverability;
  MetricValue functional_analysability;
  MetricValue fault_analysability;
};

ChangeMetrics change_metrics(const ExplorationResult& result, const ChangedSystem& changed);

struct TrialSummary {
  ChangeMetrics means;
  std::size_t trials = 0;
  /// Trials left out of each mean because the metric was not computable.
  std::map<std::string, std::size_t> exclusions;
};

/// Plan i uses seed ^ i; means are exact.
TrialSummary run_trials(const ExplorationResult& result, const DomainMap& domains,
                        const std::set<std::string>& labels, const std::function<bool(StateId)>& satisfies,
                        std::size_t trial_count, MutationCounts counts, std::uint64_t seed);

/// Folds per-trial metrics into exact means with per-metric exclusion counts.
TrialSummary summarize_trials(const std::vector<ChangeMetrics>& trials);

struct ModularityOutcome {
  std::map<std::string, MetricValue> per_operation;
  std::map<std::string, std::string> source;  // "seeded", "plan" or "machine"
  MetricValue weighted;
};

/// Per label of the derived set: a label-scoped plan with max(1, ceil(|T_a|/100)) extras
/// and missing transitions, seeded with splitmix64(seed + index + 1) in label order.
/// Entries of `overrides` (operation -> changed transition set, already computed) replace
/// the seeded plan for that operation.
ModularityOutcome modularity_sweep(const ExplorationResult& result, const DomainMap& domains,
                                   const std::function<bool(StateId)>& satisfies, std::uint64_t seed,
                                   const std::map<std::string, std::pair<TransitionSet, std::string>>& overrides = {});

}  // namespace bqual
