#include "bqual/metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "bqual/frontend.hpp"

namespace bqual {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

Ratio one_minus_jaccard(const TransitionSet& a, const TransitionSet& b, const std::string& what) {
  return Ratio(1) - Ratio::of(intersection_size(a, b), union_size(a, b), what);
}

}  // namespace

GoalSpec parse_goals(std::string_view text, const MachineAST& machine) {
  GoalSpec spec;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body.starts_with("//")) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw SyntaxError("goal must have the form NAME: predicate", {line_no, 1}, {"':'"});
    }
    auto name = trim(line.substr(0, colon));
    if (name.empty()) throw SyntaxError("empty goal name", {line_no, 1});
    auto source = line.substr(colon + 1);
    Goal goal;
    goal.name = std::string(name);
    goal.source = std::string(trim(source));
    try {
      goal.predicate = parse_predicate(source, machine);
    } catch (const SyntaxError& e) {
      SourceLocation where{line_no, e.where().line == 1 ? e.where().column + colon + 1 : e.where().column};
      throw SyntaxError("goal '" + goal.name + "': " + e.detail(), where, e.expected());
    }
    spec.goals.push_back(std::move(goal));
  }
  return spec;
}

Ratio tfcomp(const TransitionSet& derived, const TransitionSet& required) {
  return Ratio::of(intersection_size(derived, required), required.size(), "tfcomp: T_required is empty");
}

Ratio pfcomp(const TransitionSet& derived, const TransitionSet& required, const AlignmentOptions& options) {
  if (required.empty()) throw MetricError("pfcomp: T_required is empty");
  return Ratio::of(similarity(derived, required, options).total_agreement, set_size(required));
}

Ratio tfcorr(const TransitionSet& derived, const TransitionSet& required) {
  return Ratio::of(intersection_size(derived, required), derived.size(), "tfcorr: T_derived is empty");
}

Ratio pfcorr(const TransitionSet& derived, const TransitionSet& required, const AlignmentOptions& options) {
  if (derived.empty()) throw MetricError("pfcorr: T_derived is empty");
  return Ratio::of(similarity(derived, required, options).total_agreement, set_size(derived));
}

Ratio tfappr(const TransitionSet& derived, const TransitionSet& required) {
  const PairSet rp = pairs_of(required);
  return Ratio::of(intersection_size(pairs_of(derived), rp), rp.size(), "tfappr: P_required is empty");
}

Ratio pfappr(const TransitionSet& derived, const TransitionSet& required, const AlignmentOptions& options) {
  const PairSet rp = pairs_of(required);
  if (rp.empty()) throw MetricError("pfappr: P_required is empty");
  return Ratio::of(similarity(pairs_of(derived), rp, options).total_agreement, set_size(rp));
}

Ratio invariant_satisfiability(const ExplorationResult& result) {
  return Ratio::of(result.ok.size(), result.transitions.size(), "invariant_satisfiability: T_derived is empty");
}

Ratio availability(const TransitionSet& transitions, const TransitionSet& violating,
                   const std::set<std::string>& required_operations) {
  if (required_operations.empty()) throw MetricError("availability: F_required is empty");
  const auto bad = labels_of(violating);
  std::size_t n = 0;
  for (const auto& label : labels_of(transitions)) {
    if (!bad.contains(label) && required_operations.contains(label)) ++n;
  }
  return Ratio::of(n, required_operations.size());
}

Ratio availability(const ExplorationResult& result, const std::set<std::string>& required_operations) {
  return availability(result.transitions, result.violating, required_operations);
}

Ratio accountability(std::span<const StateId> states, const TransitionSet& transitions) {
  if (states.empty()) throw MetricError("accountability: S_derived is empty");
  std::unordered_map<StateId, std::size_t> ingoing;
  for (const auto& t : transitions) ++ingoing[t.post];
  std::size_t traceable = 0;
  for (StateId s : states) {
    auto it = ingoing.find(s);
    if (it == ingoing.end() || it->second <= 1) ++traceable;
  }
  return Ratio::of(traceable, states.size());
}

Ratio accountability(const ExplorationResult& result) { return accountability(result.states, result.transitions); }

Ratio fault_tolerance(const TransitionSet& u_changed, const TransitionSet& u_violating) {
  return Ratio(1) - Ratio::of(intersection_size(u_violating, u_changed), u_changed.size(),
                              "fault_tolerance: U_changed is empty");
}

Ratio recoverability(const TransitionSet& u_ok, const TransitionSet& derived) {
  return Ratio::of(intersection_size(u_ok, derived), derived.size(), "recoverability: T_derived is empty");
}

Ratio functional_analysability(const TransitionSet& derived, const TransitionSet& u_changed) {
  return one_minus_jaccard(derived, u_changed, "functional_analysability: T_derived and U_changed are empty");
}

Ratio fault_analysability(const TransitionSet& derived_violating, const TransitionSet& u_violating) {
  if (derived_violating.empty() && u_violating.empty()) return Ratio(0);
  return one_minus_jaccard(derived_violating, u_violating, "fault_analysability");
}

Ratio modularity_of(std::string_view operation, const TransitionSet& derived, const TransitionSet& delta) {
  const auto a = without_label(derived, operation);
  const auto b = without_label(delta, operation);
  return Ratio::of(intersection_size(a, b), union_size(a, b),
                   "modularity(" + std::string(operation) + "): no transitions outside the operation");
}

Ratio weighted_modularity(const std::map<std::string, Ratio>& per_operation, const TransitionSet& derived) {
  if (derived.empty()) throw MetricError("modularity: T_derived is empty");
  std::map<LabelId, std::size_t> counts;
  for (const auto& t : derived) ++counts[t.label];
  Ratio total;
  for (auto [label, n] : counts) {
    const auto& name = derived.universe()->label(label);
    auto it = per_operation.find(name);
    if (it == per_operation.end()) throw MetricError("modularity: no value for operation " + name);
    total += Ratio::of(n, derived.size()) * it->second;
  }
  return total;
}

Ratio reusability(const TransitionSet& derived) {
  return Ratio(1) - Ratio::of(labels_of(derived).size(), derived.size(), "reusability: T_derived is empty");
}

std::uint64_t capacity(const ExplorationResult& result) { return result.states.size() + result.transitions.size(); }

Ratio goal_appropriateness(const Model& model, const ExplorationResult& result, const GoalSpec& goals) {
  if (goals.goals.empty()) throw MetricError("goal_appropriateness: no goals given");
  std::size_t achieved = 0;
  for (const auto& g : goals.goals) achieved += check_goal(model, result, *g.predicate) ? 1 : 0;
  return Ratio::of(achieved, goals.goals.size());
}

Ratio learnability(std::uint64_t n_words, std::int64_t n_limit) {
  if (n_limit <= 0) throw MetricError("learnability: word limit must be positive");
  const auto limit = static_cast<std::uint64_t>(n_limit);
  return Ratio(1) - Ratio::of(std::min(n_words, limit), limit);
}

}  // namespace bqual
