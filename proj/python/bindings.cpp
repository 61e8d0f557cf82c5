// Python bindings. Structured results cross the boundary as JSON text; the package
// wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bqual/alignment.hpp"
#include "bqual/evaluate.hpp"
#include "bqual/frontend.hpp"
#include "bqual/json_io.hpp"

namespace py = pybind11;
using namespace bqual;

namespace {

TransitionSet parse_set(const std::string& text, const std::shared_ptr<Universe>& u) {
  TransitionSet out(u);
  for (const auto& j : nlohmann::json::parse(text)) out.insert(u->intern(transition_from_json(j, {})));
  return out;
}

std::string evaluate_json(const std::string& machine, std::optional<std::string> required,
                          std::optional<std::string> reference, std::optional<std::string> goals,
                          std::optional<std::string> plan, std::size_t trials, std::optional<std::size_t> n_extra,
                          std::optional<std::size_t> n_missing, std::optional<std::uint64_t> seed,
                          std::int64_t word_limit, std::size_t max_states, std::size_t max_transitions,
                          std::size_t similarity_threshold, std::map<std::string, std::string> deltas) {
  EvaluationConfig c;
  c.machine_path = machine;
  c.required_path = std::move(required);
  c.reference_path = std::move(reference);
  c.goals_path = std::move(goals);
  c.plan_path = std::move(plan);
  c.trials = trials;
  c.n_extra = n_extra;
  c.n_missing = n_missing;
  c.seed = seed;
  if (seed) c.seed_source = "flag";
  c.word_limit = word_limit;
  c.limits.max_states = max_states;
  c.limits.max_transitions = max_transitions;
  c.similarity_threshold = similarity_threshold;
  c.delta_paths = std::move(deltas);
  QualityReport report;
  {
    py::gil_scoped_release release;
    report = evaluate(c);
  }
  return report_to_json(report).dump();
}

}  // namespace

PYBIND11_MODULE(_bqual, m) {
  m.doc() = "Quality evaluation of bounded B abstract machines";

  auto base = py::register_exception<Error>(m, "BqualError");
  py::register_exception<SyntaxError>(m, "MachineSyntaxError", base);
  py::register_exception<InputError>(m, "InputError", base);
  py::register_exception<PlanError>(m, "PlanError", base);

  const ExplorationLimits defaults;
  m.def("evaluate_json", &evaluate_json, py::arg("machine"), py::arg("required") = py::none(),
        py::arg("reference") = py::none(), py::arg("goals") = py::none(), py::arg("plan") = py::none(),
        py::arg("trials") = 20, py::arg("n_extra") = py::none(), py::arg("n_missing") = py::none(),
        py::arg("seed") = py::none(), py::arg("word_limit") = 10'000, py::arg("max_states") = defaults.max_states,
        py::arg("max_transitions") = defaults.max_transitions, py::arg("similarity_threshold") = 5000,
        py::arg("deltas") = std::map<std::string, std::string>{});

  m.def(
      "explore_json",
      [](const std::string& machine, std::size_t max_states, std::size_t max_transitions, bool transitions) {
        const auto model = load_model(machine);
        auto j = exploration_to_json(explore(model, {max_states, max_transitions}), transitions);
        j["machine"] = model.ast().name;
        return j.dump();
      },
      py::arg("machine"), py::arg("max_states") = defaults.max_states,
      py::arg("max_transitions") = defaults.max_transitions, py::arg("transitions") = false);

  m.def(
      "similarity_json",
      [](const std::string& left, const std::string& right) {
        // Variable order comes from the first transition seen.
        VariableOrder order;
        for (const auto* text : {&left, &right}) {
          const auto j = nlohmann::json::parse(*text);
          if (!j.empty()) {
            const auto pre = state_from_json(j.at(0).at("pre"), {});
            for (const auto& b : pre.bindings()) order.push_back(b.first);
            break;
          }
        }
        if (order.empty()) return std::size_t{0};
        auto u = std::make_shared<Universe>(order);
        return similarity(parse_set(left, u), parse_set(right, u)).total_agreement;
      },
      py::arg("left"), py::arg("right"));

  m.def("word_count", [](const std::string& source) { return word_count(source); }, py::arg("source"));
  m.def("format_machine", [](const std::string& source) { return to_source(parse_machine(source)); },
        py::arg("source"));
}
