#pragma once

// JSON forms of transitions, mutation plans and exploration results.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bqual/explorer.hpp"
#include "bqual/lts.hpp"
#include "bqual/machine.hpp"
#include "bqual/mutation.hpp"

namespace bqual {

/// Integers and booleans map to JSON numbers and booleans; enumerated elements to their
/// name. String values are resolved against `sets`.
nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j, const std::vector<EnumeratedSet>& sets);

nlohmann::json state_to_json(const State& s);
State state_from_json(const nlohmann::json& j, const std::vector<EnumeratedSet>& sets);

/// {"pre": {...}, "op": "name", "post": {...}}
nlohmann::json transition_to_json(const Transition& t);
Transition transition_from_json(const nlohmann::json& j, const std::vector<EnumeratedSet>& sets);

/// One transition per line; blank lines are skipped. Errors carry the line number.
/// States must bind exactly the universe's variables.
TransitionSet load_transitions_jsonl(std::string_view text, const std::shared_ptr<Universe>& universe,
                                     const std::vector<EnumeratedSet>& sets);
/// Lines in canonical value order.
std::string dump_transitions_jsonl(const TransitionSet& set);
/// Value-ordered transitions of `set`.
std::vector<Transition> sorted_transitions(const TransitionSet& set);

/// {"extra": [...], "missing": [...], "seed": n, "label_scope": "op"?}. Transitions are
/// interned into the result's universe; the plan is validated against it.
MutationPlan load_plan(std::string_view text, const ExplorationResult& result, const std::vector<EnumeratedSet>& sets);
std::string dump_plan(const MutationPlan& plan);

nlohmann::json exploration_to_json(const ExplorationResult& result, bool with_transitions);

std::string read_file(const std::string& path);

}  // namespace bqual
