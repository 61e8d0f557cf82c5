#include <deque>
#include <map>
#include <set>

#include "doctest.h"

#include "corpus.hpp"

#include "bqual/mutation.hpp"

using namespace bqual;

namespace {

struct Setup {
  Model model;
  std::shared_ptr<Universe> universe;
  ExplorationResult result;

  explicit Setup(const std::string& name)
      : model(corpus_model(name)),
        universe(std::make_shared<Universe>(model.variables())),
        result(explore(model, {}, universe)) {}

  MutationPlan plan(const std::string& file) const {
    return load_plan(read_file(corpus_path(file)), result, model.ast().sets);
  }
};

// Plain-set re-implementation of the changed system, used as an oracle.
struct Reference {
  std::set<TransitionKey> t_changed;
  std::set<TransitionKey> u_changed;
  std::set<TransitionKey> u_violating;
};

Reference reference_apply(const ExplorationResult& r, const MutationPlan& plan,
                          const std::function<bool(StateId)>& satisfies) {
  std::set<TransitionKey> relation(r.transitions.begin(), r.transitions.end());
  relation.insert(plan.extra.begin(), plan.extra.end());
  for (const auto& t : plan.missing) relation.erase(t);
  std::multimap<StateId, TransitionKey> out;
  for (const auto& t : relation) out.emplace(t.pre, t);
  Reference ref;
  std::set<StateId> seen(r.initial_states.begin(), r.initial_states.end());
  std::deque<StateId> queue(r.initial_states.begin(), r.initial_states.end());
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    auto [lo, hi] = out.equal_range(s);
    for (auto it = lo; it != hi; ++it) {
      ref.t_changed.insert(it->second);
      if (seen.insert(it->second.post).second) queue.push_back(it->second.post);
    }
  }
  ref.u_changed = ref.t_changed;
  ref.u_changed.insert(plan.missing.begin(), plan.missing.end());
  for (const auto& t : plan.extra) ref.u_changed.erase(t);
  std::set<StateId> sources;
  for (const auto& t : ref.u_changed) sources.insert(t.pre);
  for (const auto& t : ref.u_changed) {
    if (!satisfies(t.post) || !sources.contains(t.post)) ref.u_violating.insert(t);
  }
  return ref;
}

bool same(const TransitionSet& a, const std::set<TransitionKey>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

TEST_CASE("bounded sampler is deterministic and in range") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(13);
    CHECK(x < 13);
    CHECK(x == b.below(13));
  }
  CHECK_THROWS_AS(a.below(0), PlanError);
  CHECK(default_counts(1440).n_extra == 15);
  CHECK(default_counts(100).n_missing == 1);
  CHECK(default_counts(1).n_missing == 1);
  CHECK(default_counts(0).n_extra == 0);
}

TEST_CASE("the CM5 plan on CM1") {
  Setup s("CM1.mch");
  const auto plan = s.plan("cm5-plan.json");
  CHECK(plan.extra.size() == 1);
  CHECK(plan.missing.size() == 1);
  const auto changed = apply_plan(s.model, s.result, plan);
  CHECK(changed.u_changed.size() == 1050);
  REQUIRE(changed.u_violating.size() == 1);
  CHECK(s.universe->transition(*changed.u_violating.begin()).to_string() == "[(5,29), inc_minute, (5,30)]");
  CHECK(changed.u_ok.size() == 1049);

  const auto m = change_metrics(s.result, changed);
  CHECK(*m.fault_tolerance.value == Ratio(1) - Ratio::of(1, 1050));
  CHECK(*m.recoverability.value == Ratio::of(1049, 1440));
  CHECK(*m.functional_analysability.value == Ratio(1) - Ratio::of(1050, 1440));
  CHECK(*m.fault_analysability.value == Ratio(1));
  CHECK(m.fault_tolerance.value->decimal() == "0.999");
  CHECK(m.recoverability.value->decimal() == "0.728");
  CHECK(m.functional_analysability.value->decimal() == "0.271");

  const auto ref = reference_apply(s.result, plan, invariant_oracle(s.model, *s.universe));
  CHECK(same(changed.t_changed, ref.t_changed));
  CHECK(same(changed.u_changed, ref.u_changed));
  CHECK(same(changed.u_violating, ref.u_violating));
}

TEST_CASE("the CM5 plan as a change of inc_minute") {
  Setup s("CM1.mch");
  const auto changed = apply_plan(s.model, s.result, s.plan("cm5-plan.json"));
  // The plan cuts 5:30 to 11:59 out of the reachable system, taking seven inc_hour
  // transitions with it.
  CHECK(modularity_of("inc_minute", s.result.transitions, changed.t_changed) == Ratio::of(17, 24));

  // The CM5 machine jumps to 6:00 instead, losing only [(5,59), inc_hour, (6,0)].
  const auto cm5 = explore(corpus_model("CM5.mch"), {}, s.universe);
  CHECK(modularity_of("inc_minute", s.result.transitions, cm5.transitions) == Ratio::of(23, 24));
}

TEST_CASE("CM6 recovers from the same plan") {
  Setup s("CM6.mch");
  const auto changed = apply_plan(s.model, s.result, s.plan("cm5-plan.json"));
  CHECK(recoverability(changed.u_ok, s.result.transitions) == Ratio(1));
}

TEST_CASE("empty plan leaves the system unchanged") {
  Setup s("CM4.mch");
  MutationPlan plan;
  plan.extra = TransitionSet(s.universe);
  plan.missing = TransitionSet(s.universe);
  const auto changed = apply_plan(s.model, s.result, plan);
  CHECK(changed.t_changed == s.result.transitions);
  CHECK(changed.u_changed == s.result.transitions);
  CHECK(changed.u_violating == s.result.violating);
  CHECK(fault_tolerance(changed.u_changed, changed.u_violating) == invariant_satisfiability(s.result));
}

TEST_CASE("plans are validated") {
  Setup s("CM1.mch");
  const auto& sets = s.model.ast().sets;
  CHECK_THROWS_AS(load_plan(R"({"extra": [{"pre": {"hour": 0, "minute": 0}, "op": "inc_minute",
                                           "post": {"hour": 0, "minute": 1}}]})",
                            s.result, sets),
                  PlanError);
  CHECK_THROWS_AS(load_plan(R"({"missing": [{"pre": {"hour": 0, "minute": 0}, "op": "inc_minute",
                                             "post": {"hour": 9, "minute": 9}}]})",
                            s.result, sets),
                  PlanError);
  CHECK_THROWS_AS(load_plan(R"({"missing": [{"pre": {"hour": 0}, "op": "inc_minute",
                                             "post": {"hour": 9, "minute": 9}}]})",
                            s.result, sets),
                  StructuralError);
  CHECK_THROWS_AS(load_plan("[1, 2]", s.result, sets), InputError);
  CHECK_THROWS_AS(load_plan("{", s.result, sets), InputError);
}

TEST_CASE("generated plans respect their invariants and are reproducible") {
  Setup s("CM1.mch");
  const std::set<std::string> labels{"inc_minute", "inc_hour", "next_day"};
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto a = generate_plan(s.result, s.model.domains(), labels, {20, 20}, seed);
    const auto b = generate_plan(s.result, s.model.domains(), labels, {20, 20}, seed);
    CHECK(dump_plan(a) == dump_plan(b));
    CHECK(a.extra.size() == 20);
    CHECK(a.missing.size() == 20);
    CHECK_NOTHROW(validate_plan(s.result, a));
    CHECK(intersection_size(a.extra, a.missing) == 0);

    const auto changed = apply_plan(s.model, s.result, a);
    const auto ref = reference_apply(s.result, a, invariant_oracle(s.model, *s.universe));
    CHECK(same(changed.t_changed, ref.t_changed));
    CHECK(same(changed.u_changed, ref.u_changed));
    CHECK(same(changed.u_violating, ref.u_violating));
  }
  const auto scoped = generate_plan(s.result, s.model.domains(), labels, {5, 5}, 3, std::string("inc_hour"));
  CHECK(labels_of(set_union(scoped.extra, scoped.missing)) == std::set<std::string>{"inc_hour"});
  CHECK_THROWS_AS(generate_plan(s.result, s.model.domains(), labels, {0, 24}, 3, std::string("inc_hour")), PlanError);
  const auto empty = generate_plan(s.result, s.model.domains(), labels, {0, 0}, 3);
  CHECK(empty.extra.empty());
  CHECK(empty.missing.empty());
}

TEST_CASE("extra draws fail when the domain product is exhausted") {
  const char* src =
      "MACHINE Tiny\nVARIABLES b\nINVARIANT b : BOOL\nINITIALISATION b := FALSE\nOPERATIONS\n"
      "  flip = SELECT b = FALSE THEN b := TRUE WHEN b = TRUE THEN b := FALSE END\nEND";
  const Model model(parse_machine(src));
  const auto r = explore(model);
  // 2 states x 1 label x 2 posts = 4 candidates, 2 already derived.
  CHECK_NOTHROW(generate_plan(r, model.domains(), {"flip"}, {2, 0}, 5));
  CHECK_THROWS_AS(generate_plan(r, model.domains(), {"flip"}, {3, 0}, 5), PlanError);
}

TEST_CASE("trials") {
  Setup s("CM1.mch");
  const std::set<std::string> labels{"inc_minute", "inc_hour", "next_day"};
  const auto oracle = invariant_oracle(s.model, *s.universe);
  const auto a = run_trials(s.result, s.model.domains(), labels, oracle, 4, {5, 5}, 11);
  const auto b = run_trials(s.result, s.model.domains(), labels, oracle, 4, {5, 5}, 11);
  CHECK(a.trials == 4);
  CHECK(*a.means.fault_tolerance.value == *b.means.fault_tolerance.value);
  CHECK(*a.means.recoverability.value == *b.means.recoverability.value);

  // Means equal the folded per-trial values of the individually generated plans.
  Ratio total;
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto plan = generate_plan(s.result, s.model.domains(), labels, {5, 5}, 11 ^ i);
    total += *change_metrics(s.result, apply_plan(s.result, plan, oracle)).recoverability.value;
  }
  CHECK(*a.means.recoverability.value == total / Ratio(4));

  const auto single = summarize_trials({change_metrics(
      s.result, apply_plan(s.model, s.result, s.plan("cm5-plan.json")))});
  CHECK(*single.means.recoverability.value == Ratio::of(1049, 1440));
  CHECK_THROWS_AS(run_trials(s.result, s.model.domains(), labels, oracle, 0, {1, 1}, 1), PlanError);
}

TEST_CASE("modularity sweep") {
  Setup s("CM1.mch");
  const auto oracle = invariant_oracle(s.model, *s.universe);
  const auto a = modularity_sweep(s.result, s.model.domains(), oracle, 5);
  const auto b = modularity_sweep(s.result, s.model.domains(), oracle, 5);
  REQUIRE(a.per_operation.size() == 3);
  REQUIRE(a.weighted.computed());
  CHECK(*a.weighted.value == *b.weighted.value);
  CHECK(*a.weighted.value <= Ratio(1));

  std::map<std::string, std::pair<TransitionSet, std::string>> same_system;
  for (const auto& op : labels_of(s.result.transitions)) same_system[op] = {s.result.transitions, "machine"};
  const auto unchanged = modularity_sweep(s.result, s.model.domains(), oracle, 5, same_system);
  CHECK(*unchanged.weighted.value == Ratio(1));
}

TEST_CASE("pinned means of twenty seeded trials on CM1") {
  Setup s("CM1.mch");
  const std::set<std::string> labels{"inc_minute", "inc_hour", "next_day"};
  const auto oracle = invariant_oracle(s.model, *s.universe);
  const auto summary = run_trials(s.result, s.model.domains(), labels, oracle, 20, {5, 5}, 42);
  CHECK(summary.means.fault_tolerance.value->exact() ==
        "256453144636752945264867894675239/262070555996820124262898217405440");
  CHECK(summary.means.recoverability.value->exact() == "25/96");
  CHECK(summary.means.functional_analysability.value->exact() == "53/72");
  CHECK(*summary.means.fault_analysability.value == Ratio(1));

  // Same means from the plain-set changed system and the formulas spelled out.
  const std::set<TransitionKey> derived(s.result.transitions.begin(), s.result.transitions.end());
  const std::set<TransitionKey> derived_bad(s.result.violating.begin(), s.result.violating.end());
  auto count_common = [](const std::set<TransitionKey>& a, const std::set<TransitionKey>& b) {
    std::size_t n = 0;
    for (const auto& t : a) n += b.contains(t) ? 1 : 0;
    return n;
  };
  Ratio ft, rec, fa, fau;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto plan = generate_plan(s.result, s.model.domains(), labels, {5, 5}, 42 ^ i);
    const auto ref = reference_apply(s.result, plan, oracle);
    const auto u = ref.u_changed.size();
    const auto bad = ref.u_violating.size();
    ft += Ratio(1) - Ratio::of(bad, u);
    rec += Ratio::of(count_common(ref.u_changed, derived) - count_common(ref.u_violating, derived), derived.size());
    const auto common = count_common(derived, ref.u_changed);
    fa += Ratio(1) - Ratio::of(common, derived.size() + u - common);
    const auto common_bad = count_common(derived_bad, ref.u_violating);
    const auto union_bad = derived_bad.size() + bad - common_bad;
    fau += union_bad == 0 ? Ratio(0) : Ratio(1) - Ratio::of(common_bad, union_bad);
  }
  CHECK(*summary.means.fault_tolerance.value == ft / Ratio(20));
  CHECK(*summary.means.recoverability.value == rec / Ratio(20));
  CHECK(*summary.means.functional_analysability.value == fa / Ratio(20));
  CHECK(*summary.means.fault_analysability.value == fau / Ratio(20));
}
