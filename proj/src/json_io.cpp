#include "bqual/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bqual {

using nlohmann::json;

json value_to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::integer:
      return v.as_integer();
    case ValueKind::boolean:
      return v.as_boolean();
    case ValueKind::enumerated:
      return std::string(v.enum_element());
  }
  return nullptr;
}

Value value_from_json(const json& j, const std::vector<EnumeratedSet>& sets) {
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    for (const auto& set : sets) {
      if (std::find(set.elements.begin(), set.elements.end(), name) != set.elements.end()) {
        return Value::enumerated(set.name, name);
      }
    }
    throw InputError("unknown enumerated element '" + name + "'");
  }
  throw InputError("unsupported value " + j.dump() + " (expected integer, boolean or element name)");
}

json state_to_json(const State& s) {
  json out = json::object();
  for (const auto& [name, value] : s.bindings()) out[name] = value_to_json(value);
  return out;
}

State state_from_json(const json& j, const std::vector<EnumeratedSet>& sets) {
  if (!j.is_object()) throw InputError("state must be a JSON object, got " + j.dump());
  std::vector<State::Binding> bindings;
  for (const auto& [name, value] : j.items()) bindings.emplace_back(name, value_from_json(value, sets));
  return State(std::move(bindings));
}

json transition_to_json(const Transition& t) {
  json out = json::object();
  out["pre"] = state_to_json(t.pre);
  out["op"] = t.label;
  out["post"] = state_to_json(t.post);
  return out;
}

Transition transition_from_json(const json& j, const std::vector<EnumeratedSet>& sets) {
  if (!j.is_object()) throw InputError("transition must be a JSON object");
  for (const char* field : {"pre", "op", "post"}) {
    if (!j.contains(field)) throw InputError(std::string("transition lacks \"") + field + "\"");
  }
  if (!j.at("op").is_string()) throw InputError("\"op\" must be a string");
  return {state_from_json(j.at("pre"), sets), j.at("op").get<std::string>(), state_from_json(j.at("post"), sets)};
}

namespace {

TransitionKey intern_checked(Universe& u, const Transition& t) {
  // row() names missing and unknown variables.
  const auto pre = t.pre.row(u.variables());
  const auto post = t.post.row(u.variables());
  return {u.intern(pre), u.intern_label(t.label), u.intern(post)};
}

}  // namespace

TransitionSet load_transitions_jsonl(std::string_view text, const std::shared_ptr<Universe>& universe,
                                     const std::vector<EnumeratedSet>& sets) {
  std::vector<TransitionKey> keys;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      keys.push_back(intern_checked(*universe, transition_from_json(json::parse(line), sets)));
    } catch (const json::exception& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const StructuralError& e) {
      throw StructuralError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (keys.empty()) throw InputError("no transitions in required-transitions file");
  return TransitionSet(universe, std::move(keys));
}

std::vector<Transition> sorted_transitions(const TransitionSet& set) {
  auto out = set.to_transitions();
  std::sort(out.begin(), out.end());
  return out;
}

std::string dump_transitions_jsonl(const TransitionSet& set) {
  std::string out;
  for (const auto& t : sorted_transitions(set)) out += transition_to_json(t).dump() + "\n";
  return out;
}

MutationPlan load_plan(std::string_view text, const ExplorationResult& result, const std::vector<EnumeratedSet>& sets) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("plan: ") + e.what());
  }
  if (!j.is_object()) throw InputError("plan must be a JSON object");
  MutationPlan plan;
  auto& u = *result.universe;
  auto read = [&](const char* field) {
    std::vector<TransitionKey> keys;
    if (!j.contains(field)) return TransitionSet(result.universe);
    if (!j.at(field).is_array()) throw InputError(std::string("plan: \"") + field + "\" must be an array");
    for (const auto& t : j.at(field)) keys.push_back(intern_checked(u, transition_from_json(t, sets)));
    return TransitionSet(result.universe, std::move(keys));
  };
  plan.extra = read("extra");
  plan.missing = read("missing");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InputError("plan: \"seed\" must be a non-negative integer");
    plan.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("label_scope") && !j.at("label_scope").is_null()) {
    plan.label_scope = j.at("label_scope").get<std::string>();
  }
  plan.counts = {plan.extra.size(), plan.missing.size()};
  validate_plan(result, plan);
  return plan;
}

std::string dump_plan(const MutationPlan& plan) {
  json j = json::object();
  j["extra"] = json::array();
  for (const auto& t : sorted_transitions(plan.extra)) j["extra"].push_back(transition_to_json(t));
  j["missing"] = json::array();
  for (const auto& t : sorted_transitions(plan.missing)) j["missing"].push_back(transition_to_json(t));
  j["seed"] = plan.seed;
  if (plan.label_scope) j["label_scope"] = *plan.label_scope;
  return j.dump(2) + "\n";
}

json exploration_to_json(const ExplorationResult& result, bool with_transitions) {
  json j = json::object();
  j["variables"] = result.variables();
  j["initial_states"] = json::array();
  for (StateId s : result.initial_states) j["initial_states"].push_back(state_to_json(result.universe->state(s)));
  j["states"] = result.states.size();
  j["transitions"] = result.transitions.size();
  j["violating_transitions"] = result.violating.size();
  j["deadlock_states"] = result.deadlock_states.size();
  j["invariant_violating_states"] = result.invariant_violating_states.size();
  j["truncated"] = result.truncated;
  if (with_transitions) {
    j["transition_list"] = json::array();
    for (const auto& t : sorted_transitions(result.transitions)) {
      auto item = transition_to_json(t);
      item["violating"] = result.violating.contains(t);
      j["transition_list"].push_back(std::move(item));
    }
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace bqual
