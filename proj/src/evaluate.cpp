#include "bqual/evaluate.hpp"

#include "bqual/frontend.hpp"
#include "bqual/json_io.hpp"
#include "bqual/mutation.hpp"

namespace bqual {

namespace {

std::string labels_text(const std::set<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) out += (out.empty() ? "" : ", ") + l;
  return out;
}

}  // namespace

Model load_model(const std::string& path) {
  const auto source = read_file(path);
  try {
    return Model(parse_machine(source));
  } catch (const SyntaxError& e) {
    throw e.in_file(path);
  }
}

RequirementSpec load_required(const EvaluationConfig& config, const Model& target,
                              const std::shared_ptr<Universe>& universe) {
  RequirementSpec spec;
  if (config.required_path) {
    spec.required_transitions =
        load_transitions_jsonl(read_file(*config.required_path), universe, target.ast().sets);
  } else if (config.reference_path) {
    const Model reference = load_model(*config.reference_path);
    auto result = explore(reference, config.limits, universe);
    if (result.truncated) {
      throw ExplorationError("reference machine " + *config.reference_path + " exceeded the exploration limits");
    }
    spec.required_transitions = std::move(result.transitions);
  } else {
    throw InputError("no required transitions: give a transitions file or a reference machine");
  }
  return spec;
}

QualityReport evaluate(const EvaluationConfig& config) {
  QualityReport report;
  const auto source = read_file(config.machine_path);
  const Model model = [&] {
    try {
      return Model(parse_machine(source));
    } catch (const SyntaxError& e) {
      throw e.in_file(config.machine_path);
    }
  }();
  report.machine = model.ast().name;

  auto universe = std::make_shared<Universe>(model.variables());
  const ExplorationResult result = explore(model, config.limits, universe);
  report.cpu_seconds = result.metering.cpu_seconds;
  report.peak_memory_bytes = result.metering.peak_memory_bytes;
  report.exploration = {result.initial_states.size(), result.states.size(), result.transitions.size(),
                        result.violating.size(),      result.deadlock_states.size(),
                        result.invariant_violating_states.size(), result.truncated};

  auto& p = report.provenance;
  p.machine_path = config.machine_path;
  p.seed = config.seed.value_or(default_seed);
  p.seed_source = config.seed ? config.seed_source : "default";
  p.max_states = config.limits.max_states;
  p.max_transitions = config.limits.max_transitions;
  p.word_limit = config.word_limit;
  p.n_words = word_count(source);
  p.similarity_threshold = config.similarity_threshold;
  p.goals_path = config.goals_path.value_or("");
  p.plan_path = config.plan_path.value_or("");
  p.delta_paths = config.delta_paths;

  // functional suitability
  std::optional<RequirementSpec> required;
  std::string no_required = "no required transitions given";
  if (config.required_path || config.reference_path) {
    p.required_source = config.required_path ? "transitions" : "reference";
    p.required_path = config.required_path ? *config.required_path : *config.reference_path;
    required = load_required(config, model, universe);
  } else {
    p.required_source = "none";
  }
  const AlignmentOptions align{config.similarity_threshold};
  const auto& td = result.transitions;
  auto functional = [&](Metric m, auto f) {
    report[m] = required ? attempt([&] { return f(td, required->required_transitions); })
                         : MetricValue::missing(no_required);
  };
  functional(Metric::tfcomp, [](const auto& d, const auto& r) { return tfcomp(d, r); });
  functional(Metric::pfcomp, [&](const auto& d, const auto& r) { return pfcomp(d, r, align); });
  functional(Metric::tfcorr, [](const auto& d, const auto& r) { return tfcorr(d, r); });
  functional(Metric::pfcorr, [&](const auto& d, const auto& r) { return pfcorr(d, r, align); });
  functional(Metric::tfappr, [](const auto& d, const auto& r) { return tfappr(d, r); });
  functional(Metric::pfappr, [&](const auto& d, const auto& r) { return pfappr(d, r, align); });

  // security, reliability, reuse, capacity
  report[Metric::invariant_satisfiability] = attempt([&] { return invariant_satisfiability(result); });
  report[Metric::availability] =
      required ? attempt([&] { return availability(result, required->required_operations()); })
               : MetricValue::missing(no_required);
  report[Metric::accountability] = attempt([&] { return accountability(result); });
  report[Metric::reusability] = attempt([&] { return reusability(td); });
  report.capacity = capacity(result);

  // usability
  if (config.goals_path) {
    GoalSpec goals;
    try {
      goals = parse_goals(read_file(*config.goals_path), model.ast());
    } catch (const SyntaxError& e) {
      throw e.in_file(*config.goals_path);
    }
    for (const auto& g : goals.goals) report.goals.emplace_back(g.name, check_goal(model, result, *g.predicate));
    report[Metric::goal_appropriateness] = attempt([&] { return goal_appropriateness(model, result, goals); });
  } else {
    report[Metric::goal_appropriateness] = MetricValue::missing("no goals given");
  }
  report[Metric::learnability] = attempt([&] { return learnability(p.n_words, config.word_limit); });

  // mutation
  const auto satisfies = invariant_oracle(model, *universe);
  std::set<std::string> operations;
  for (const auto& op : model.ast().operations) operations.insert(op.name);
  std::map<std::string, std::pair<TransitionSet, std::string>> overrides;
  TrialSummary trials;
  auto& m = report.mutation;
  try {
    if (config.plan_path) {
      const auto plan = load_plan(read_file(*config.plan_path), result, model.ast().sets);
      const auto changed = apply_plan(result, plan, satisfies);
      trials = summarize_trials({change_metrics(result, changed)});
      m.mode = "plan";
      m.n_extra = plan.extra.size();
      m.n_missing = plan.missing.size();
      // A plan touching a single operation doubles as that operation's change.
      const auto touched = labels_of(set_union(plan.extra, plan.missing));
      if (touched.size() == 1) overrides[*touched.begin()] = {changed.t_changed, "plan"};
    } else {
      const auto defaults = default_counts(td.size());
      const MutationCounts counts{config.n_extra.value_or(defaults.n_extra),
                                  config.n_missing.value_or(defaults.n_missing)};
      m.mode = "seeded";
      m.n_extra = counts.n_extra;
      m.n_missing = counts.n_missing;
      trials = run_trials(result, model.domains(), operations, satisfies, config.trials, counts, p.seed);
    }
    m.trials = trials.trials;
    m.exclusions = trials.exclusions;
    report[Metric::fault_tolerance] = trials.means.fault_tolerance;
    report[Metric::recoverability] = trials.means.recoverability;
    report[Metric::functional_analysability] = trials.means.functional_analysability;
    report[Metric::fault_analysability] = trials.means.fault_analysability;
  } catch (const PlanError& e) {
    m.error = e.what();
    for (auto metric : {Metric::fault_tolerance, Metric::recoverability, Metric::functional_analysability,
                        Metric::fault_analysability}) {
      report[metric] = MetricValue::missing(std::string("mutation failed: ") + e.what());
    }
  }

  for (const auto& [op, path] : config.delta_paths) {
    const auto changed_labels = labels_of(td);
    if (!changed_labels.contains(op)) {
      throw InputError("--delta names operation '" + op + "', which derives no transitions (derived: " +
                       labels_text(changed_labels) + ")");
    }
    const Model delta = load_model(path);
    auto delta_result = explore(delta, config.limits, universe);
    overrides[op] = {std::move(delta_result.transitions), "machine"};
  }
  auto modularity = modularity_sweep(result, model.domains(), satisfies, p.seed, overrides);
  report.modularity_per_operation = std::move(modularity.per_operation);
  report.modularity_source = std::move(modularity.source);
  report[Metric::modularity] = std::move(modularity.weighted);
  return report;
}

}  // namespace bqual
