#include "bqual/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace bqual {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, metric_count> names = {
    "tfcomp",
    "pfcomp",
    "tfcorr",
    "pfcorr",
    "tfappr",
    "pfappr",
    "invariant_satisfiability",
    "availability",
    "accountability",
    "fault_tolerance",
    "recoverability",
    "functional_analysability",
    "fault_analysability",
    "modularity",
    "reusability",
    "goal_appropriateness",
    "learnability",
};

json decimal_json(const Ratio& r) { return json::parse(r.decimal(3)); }

json metric_json(const MetricValue& v) { return v.computed() ? decimal_json(*v.value) : json("not-computed"); }

// Sub-characteristics mapped onto the computed metrics that measure them.
json characteristics() {
  using L = std::vector<std::string>;
  json c = json::object();
  c["functional_suitability"] = {
      {"functional_completeness", L{"tfcomp", "pfcomp"}},
      {"functional_correctness", L{"tfcorr", "pfcorr"}},
      {"functional_appropriateness", L{"tfappr", "pfappr"}},
  };
  c["security"] = {
      {"confidentiality", L{"invariant_satisfiability"}},
      {"integrity", L{"invariant_satisfiability"}},
      {"non_repudiation", L{"availability"}},
      {"accountability", L{"accountability"}},
      {"authenticity", L{"invariant_satisfiability"}},
  };
  c["reliability"] = {
      {"maturity", L{"tfcomp", "pfcomp", "tfcorr", "pfcorr", "invariant_satisfiability"}},
      {"availability", L{"availability"}},
      {"fault_tolerance", L{"fault_tolerance"}},
      {"recoverability", L{"recoverability"}},
  };
  c["maintainability"] = {
      {"analysability", L{"functional_analysability", "fault_analysability"}},
      {"modifiability",
       L{"functional_analysability", "fault_analysability", "recoverability", "modularity", "learnability"}},
      {"modularity", L{"modularity"}},
      {"reusability", L{"reusability"}},
      {"testability", L{"cpu_seconds"}},
  };
  c["performance_efficiency"] = {
      {"time_behaviour", L{"cpu_seconds"}},
      {"resource_utilisation", L{"peak_memory_bytes"}},
      {"capacity", L{"capacity"}},
  };
  c["usability"] = {
      {"appropriateness_recognisability", L{"tfappr", "pfappr", "goal_appropriateness"}},
      {"user_error_protection",
       L{"invariant_satisfiability", "availability", "accountability", "fault_tolerance", "recoverability"}},
      {"learnability", L{"learnability"}},
  };
  return c;
}

std::string with_commas(std::uint64_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string_view metric_name(Metric m) { return names.at(static_cast<std::size_t>(m)); }

std::optional<Metric> metric_from_name(std::string_view name) {
  if (name == "invariant_satisfability") return Metric::invariant_satisfiability;
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<Metric>(it - names.begin());
}

bool QualityReport::all_computed() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const MetricValue& v) { return v.computed(); });
}

json report_to_json(const QualityReport& r) {
  json j = json::object();
  j["schema"] = report_schema_id;
  j["machine"] = r.machine;

  json metrics = json::object();
  json exact = json::object();
  json not_computed = json::object();
  for (std::size_t i = 0; i < metric_count; ++i) {
    const auto name = std::string(names[i]);
    metrics[name] = metric_json(r.metrics[i]);
    if (r.metrics[i].computed()) {
      exact[name] = r.metrics[i].value->exact();
    } else {
      not_computed[name] = r.metrics[i].reason;
    }
  }
  metrics["capacity"] = r.capacity;
  metrics["cpu_seconds"] = json::parse(fixed(r.cpu_seconds, 3));
  metrics["peak_memory_bytes"] = r.peak_memory_bytes;
  j["metrics"] = std::move(metrics);
  j["exact"] = std::move(exact);
  j["not_computed"] = std::move(not_computed);
  j["aliases"] = {{"invariant_satisfability", "invariant_satisfiability"}};
  j["characteristics"] = characteristics();

  j["exploration"] = {
      {"initial_states", r.exploration.initial_states},
      {"states", r.exploration.states},
      {"transitions", r.exploration.transitions},
      {"violating_transitions", r.exploration.violating_transitions},
      {"deadlock_states", r.exploration.deadlock_states},
      {"invariant_violating_states", r.exploration.invariant_violating_states},
      {"truncated", r.exploration.truncated},
  };

  json mutation = {
      {"mode", r.mutation.mode},
      {"trials", r.mutation.trials},
      {"n_extra", r.mutation.n_extra},
      {"n_missing", r.mutation.n_missing},
      {"exclusions", r.mutation.exclusions},
  };
  if (!r.mutation.error.empty()) mutation["error"] = r.mutation.error;
  j["mutation"] = std::move(mutation);

  json modularity = json::object();
  for (const auto& [op, v] : r.modularity_per_operation) {
    json entry = {{"value", metric_json(v)}};
    if (v.computed()) {
      entry["exact"] = v.value->exact();
    } else {
      entry["reason"] = v.reason;
    }
    auto src = r.modularity_source.find(op);
    entry["source"] = src == r.modularity_source.end() ? "seeded" : src->second;
    modularity[op] = std::move(entry);
  }
  j["modularity"] = std::move(modularity);

  json goals = json::array();
  for (const auto& [name, achieved] : r.goals) goals.push_back({{"name", name}, {"achieved", achieved}});
  j["goals"] = std::move(goals);

  const auto& p = r.provenance;
  j["provenance"] = {
      {"machine_path", p.machine_path},
      {"required_source", p.required_source},
      {"required_path", p.required_path},
      {"goals_path", p.goals_path},
      {"plan_path", p.plan_path},
      {"seed", p.seed},
      {"seed_source", p.seed_source},
      {"max_states", p.max_states},
      {"max_transitions", p.max_transitions},
      {"word_limit", p.word_limit},
      {"n_words", p.n_words},
      {"similarity_threshold", p.similarity_threshold},
      {"delta_machines", p.delta_paths},
  };
  return j;
}

std::string render_report(const QualityReport& r, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(r).dump(2) + "\n";

  auto value = [&r](Metric m) {
    const auto& v = r[m];
    return v.computed() ? v.value->decimal(3) : std::string("n/c");
  };
  using Cell = std::pair<std::string, std::string>;
  const std::vector<std::vector<Cell>> rows = {
      {{"TFComp", value(Metric::tfcomp)},
       {"PFComp", value(Metric::pfcomp)},
       {"TFCorr", value(Metric::tfcorr)},
       {"PFCorr", value(Metric::pfcorr)}},
      {{"TFAppr", value(Metric::tfappr)},
       {"PFAppr", value(Metric::pfappr)},
       {"Inv. Sat.", value(Metric::invariant_satisfiability)},
       {"Availability", value(Metric::availability)}},
      {{"Accountability", value(Metric::accountability)},
       {"Fau. Tol.", value(Metric::fault_tolerance)},
       {"Recoverability", value(Metric::recoverability)},
       {"Fun. Ana.", value(Metric::functional_analysability)}},
      {{"Fau. Ana.", value(Metric::fault_analysability)},
       {"Modularity", value(Metric::modularity)},
       {"Reusability", value(Metric::reusability)},
       {"CPU Time", fixed(r.cpu_seconds, 3) + " (s)"}},
      {{"Peak Mem.", fixed(static_cast<double>(r.peak_memory_bytes) / 1e9, 3) + " (GB)"},
       {"Capacity", with_commas(r.capacity)},
       {"GAppr", value(Metric::goal_appropriateness)},
       {"Learnability", value(Metric::learnability)}},
  };
  std::size_t width = 0;
  for (const auto& row : rows) {
    for (const auto& [head, cell] : row) width = std::max({width, head.size(), cell.size()});
  }
  const std::size_t label_width = std::max<std::size_t>(r.machine.size(), 5);
  auto cell = [width](const std::string& s) { return " " + s + std::string(width - s.size(), ' ') + " |"; };
  std::string rule = "+" + std::string(label_width + 2, '-') + "+";
  for (int i = 0; i < 4; ++i) rule += std::string(width + 2, '-') + "+";

  std::ostringstream out;
  out << rule << "\n";
  for (const auto& row : rows) {
    out << "| " << std::string(label_width, ' ') << " |";
    for (const auto& [head, _] : row) out << cell(head);
    out << "\n| " << r.machine << std::string(label_width - r.machine.size(), ' ') << " |";
    for (const auto& [_, v] : row) out << cell(v);
    out << "\n" << rule << "\n";
  }
  for (std::size_t i = 0; i < metric_count; ++i) {
    if (!r.metrics[i].computed()) out << "n/c " << names[i] << ": " << r.metrics[i].reason << "\n";
  }
  if (r.exploration.truncated) out << "warning: exploration truncated at the state or transition limit\n";
  return out.str();
}

}  // namespace bqual
