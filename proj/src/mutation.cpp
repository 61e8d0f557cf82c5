#include "bqual/mutation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bqual {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw PlanError("empty sampling range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MutationCounts default_counts(std::size_t transitions) {
  if (transitions == 0) return {};
  const std::size_t n = std::max<std::size_t>(1, (transitions + 99) / 100);
  return {n, n};
}

namespace {

__extension__ using Wide = unsigned __int128;

struct KeyHash {
  std::size_t operator()(const TransitionKey& k) const noexcept {
    return splitmix64((std::uint64_t{k.pre} << 32 | k.post) ^ (std::uint64_t{k.label} * 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace

MutationPlan generate_plan(const ExplorationResult& result, const DomainMap& domains,
                           const std::set<std::string>& labels, MutationCounts counts, std::uint64_t seed,
                           const std::optional<std::string>& label_scope) {
  Universe& u = *result.universe;
  MutationPlan plan;
  plan.extra = TransitionSet(result.universe);
  plan.missing = TransitionSet(result.universe);
  plan.label_scope = label_scope;
  plan.seed = seed;
  plan.counts = counts;
  Rng rng(seed);

  std::optional<LabelId> scope_id;
  if (label_scope) scope_id = u.intern_label(*label_scope);

  // missing
  std::vector<TransitionKey> eligible;
  for (const auto& t : result.transitions) {
    if (!scope_id || t.label == *scope_id) eligible.push_back(t);
  }
  if (counts.n_missing > eligible.size()) {
    throw PlanError("cannot remove " + std::to_string(counts.n_missing) + " transitions: only " +
                    std::to_string(eligible.size()) + " eligible");
  }
  std::vector<TransitionKey> missing;
  for (std::size_t i = 0; i < counts.n_missing; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
    missing.push_back(eligible[i]);
  }
  plan.missing = TransitionSet(result.universe, std::move(missing));

  if (counts.n_extra == 0) return plan;

  // extra
  std::vector<LabelId> label_pool;
  if (scope_id) {
    label_pool.push_back(*scope_id);
  } else {
    for (const auto& l : labels) label_pool.push_back(u.intern_label(l));
  }
  if (label_pool.empty()) throw PlanError("no operation labels to draw extra transitions from");
  if (result.states.empty()) throw PlanError("no derived states to draw extra transitions from");

  std::vector<const Domain*> column;
  for (const auto& v : u.variables()) column.push_back(&domains.at(v));
  Wide product = 1;
  for (const auto* d : column) {
    product *= d->size();
    if (product > (Wide{1} << 100)) break;
  }
  std::unordered_map<LabelId, std::size_t> existing;
  for (const auto& t : result.transitions) ++existing[t.label];
  Wide capacity = 0;
  for (LabelId l : label_pool) {
    capacity += Wide{result.states.size()} * product - existing[l];
  }
  if (Wide{counts.n_extra} > capacity) {
    throw PlanError("domain product too small for " + std::to_string(counts.n_extra) + " distinct extra transitions");
  }

  std::unordered_set<TransitionKey, KeyHash> drawn;
  std::vector<TransitionKey> extra;
  Row post(column.size());
  while (extra.size() < counts.n_extra) {
    const StateId pre = result.states[rng.below(result.states.size())];
    const LabelId label = label_pool[rng.below(label_pool.size())];
    for (std::size_t i = 0; i < column.size(); ++i) post[i] = column[i]->at(rng.below(column[i]->size()));
    // Look up before interning so rejected draws leave the universe untouched.
    auto post_id = u.find(post);
    if (post_id) {
      const TransitionKey key{pre, label, *post_id};
      if (result.transitions.contains(key) || drawn.contains(key)) continue;
    }
    const TransitionKey key{pre, label, u.intern(post)};
    drawn.insert(key);
    extra.push_back(key);
  }
  plan.extra = TransitionSet(result.universe, std::move(extra));
  return plan;
}

void validate_plan(const ExplorationResult& result, const MutationPlan& plan) {
  require_same_universe(result.transitions.universe(), plan.extra.universe());
  require_same_universe(result.transitions.universe(), plan.missing.universe());
  const Universe& u = *result.universe;
  for (const auto& t : plan.extra) {
    if (result.transitions.contains(t)) {
      throw PlanError("extra transition " + u.transition(t).to_string() + " is already derived");
    }
  }
  for (const auto& t : plan.missing) {
    if (!result.transitions.contains(t)) {
      throw PlanError("missing transition " + u.transition(t).to_string() + " is not derived");
    }
  }
  if (plan.label_scope) {
    for (const auto* set : {&plan.extra, &plan.missing}) {
      for (const auto& t : *set) {
        if (u.label(t.label) != *plan.label_scope) {
          throw PlanError("transition " + u.transition(t).to_string() + " is outside the label scope " +
                          *plan.label_scope);
        }
      }
    }
  }
}

ChangedSystem apply_plan(const ExplorationResult& result, const MutationPlan& plan,
                         const std::function<bool(StateId)>& satisfies) {
  validate_plan(result, plan);
  const auto& universe = result.universe;
  const TransitionSet relation = set_difference(set_union(result.transitions, plan.extra), plan.missing);

  // Keys are sorted by pre-state, so each state's outgoing run is contiguous.
  const auto& keys = relation.keys();
  auto outgoing = [&keys](StateId s) {
    auto lo = std::lower_bound(keys.begin(), keys.end(), TransitionKey{s, 0, 0});
    auto hi = std::lower_bound(lo, keys.end(), TransitionKey{s + 1, 0, 0});
    return std::pair{lo, hi};
  };
  std::unordered_set<StateId> seen(result.initial_states.begin(), result.initial_states.end());
  std::deque<StateId> queue(result.initial_states.begin(), result.initial_states.end());
  std::vector<TransitionKey> reached;
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    auto [lo, hi] = outgoing(s);
    for (auto it = lo; it != hi; ++it) {
      reached.push_back(*it);
      if (seen.insert(it->post).second) queue.push_back(it->post);
    }
  }

  ChangedSystem out;
  out.t_changed = TransitionSet(universe, std::move(reached));
  out.u_changed = set_difference(set_union(out.t_changed, plan.missing), plan.extra);

  std::unordered_set<StateId> has_outgoing;
  for (const auto& t : out.u_changed) has_outgoing.insert(t.pre);
  std::unordered_map<StateId, bool> ok_state;
  std::vector<TransitionKey> ok;
  std::vector<TransitionKey> bad;
  for (const auto& t : out.u_changed) {
    auto it = ok_state.find(t.post);
    if (it == ok_state.end()) it = ok_state.emplace(t.post, satisfies(t.post) && has_outgoing.contains(t.post)).first;
    (it->second ? ok : bad).push_back(t);
  }
  out.u_ok = TransitionSet(universe, std::move(ok));
  out.u_violating = TransitionSet(universe, std::move(bad));
  return out;
}

ChangedSystem apply_plan(const Model& model, const ExplorationResult& result, const MutationPlan& plan) {
  return apply_plan(result, plan, invariant_oracle(model, *result.universe));
}

ChangeMetrics change_metrics(const ExplorationResult& result, const ChangedSystem& changed) {
  ChangeMetrics m;
  m.fault_tolerance = attempt([&] { return fault_tolerance(changed.u_changed, changed.u_violating); });
  m.recoverability = attempt([&] { return recoverability(changed.u_ok, result.transitions); });
  m.functional_analysability = attempt([&] { return functional_analysability(result.transitions, changed.u_changed); });
  m.fault_analysability = attempt([&] { return fault_analysability(result.violating, changed.u_violating); });
  return m;
}

TrialSummary summarize_trials(const std::vector<ChangeMetrics>& trials) {
  TrialSummary summary;
  summary.trials = trials.size();
  auto fold = [&](const char* name, MetricValue ChangeMetrics::*field) {
    Ratio total;
    std::size_t n = 0;
    std::string reason;
    for (const auto& t : trials) {
      const auto& v = t.*field;
      if (v.computed()) {
        total += *v.value;
        ++n;
      } else if (reason.empty()) {
        reason = v.reason;
      }
    }
    summary.exclusions[name] = trials.size() - n;
    if (n == 0) {
      summary.means.*field = MetricValue::missing(trials.empty() ? "no trials" : "not computable in any trial: " + reason);
    } else {
      summary.means.*field = {total / Ratio(static_cast<std::int64_t>(n)), {}};
    }
  };
  fold("fault_tolerance", &ChangeMetrics::fault_tolerance);
  fold("recoverability", &ChangeMetrics::recoverability);
  fold("functional_analysability", &ChangeMetrics::functional_analysability);
  fold("fault_analysability", &ChangeMetrics::fault_analysability);
  return summary;
}

TrialSummary run_trials(const ExplorationResult& result, const DomainMap& domains,
                        const std::set<std::string>& labels, const std::function<bool(StateId)>& satisfies,
                        std::size_t trial_count, MutationCounts counts, std::uint64_t seed) {
  if (trial_count == 0) throw PlanError("at least one trial is required");
  std::vector<ChangeMetrics> per_trial;
  per_trial.reserve(trial_count);
  for (std::size_t i = 0; i < trial_count; ++i) {
    const auto plan = generate_plan(result, domains, labels, counts, seed ^ i);
    per_trial.push_back(change_metrics(result, apply_plan(result, plan, satisfies)));
  }
  return summarize_trials(per_trial);
}

ModularityOutcome modularity_sweep(const ExplorationResult& result, const DomainMap& domains,
                                   const std::function<bool(StateId)>& satisfies, std::uint64_t seed,
                                   const std::map<std::string, std::pair<TransitionSet, std::string>>& overrides) {
  ModularityOutcome out;
  const auto labels = labels_of(result.transitions);
  std::map<std::string, Ratio> values;
  std::size_t index = 0;
  for (const auto& label : labels) {
    const std::uint64_t op_seed = splitmix64(seed + index + 1);
    ++index;
    MetricValue value;
    auto found = overrides.find(label);
    if (found != overrides.end()) {
      value = attempt([&] { return modularity_of(label, result.transitions, found->second.first); });
      out.source[label] = found->second.second;
    } else {
      const auto share = with_label(result.transitions, label).size();
      const std::size_t n = std::max<std::size_t>(1, (share + 99) / 100);
      try {
        const auto plan = generate_plan(result, domains, labels, {n, n}, op_seed, label);
        const auto changed = apply_plan(result, plan, satisfies);
        value = attempt([&] { return modularity_of(label, result.transitions, changed.t_changed); });
      } catch (const PlanError& e) {
        value = MetricValue::missing(e.what());
      }
      out.source[label] = "seeded";
    }
    if (value.computed()) values.emplace(label, *value.value);
    out.per_operation.emplace(label, std::move(value));
  }
  out.weighted = attempt([&] { return weighted_modularity(values, result.transitions); });
  return out;
}

}  // namespace bqual
