#include <memory>

#include "doctest.h"

#include "bqual/lts.hpp"

using namespace bqual;

namespace {

State hm(std::int64_t h, std::int64_t m) {
  return State({{"hour", Value::integer(h)}, {"minute", Value::integer(m)}});
}

}  // namespace

TEST_CASE("flatten a transition in variable order") {
  const VariableOrder order{"hour", "minute"};
  const Transition t{hm(1, 59), "inc_hour", hm(2, 1)};
  const auto flat = flatten_transition(t, order);
  REQUIRE(flat.size() == 5);
  CHECK(to_string(flat) == "[1, 59, inc_hour, 2, 1]");
  CHECK(flatten_pair({t.pre, t.post}, order).size() == 4);

  const VariableOrder reversed{"minute", "hour"};
  CHECK(std::get<Value>(flatten_transition(t, reversed)[0]) == Value::integer(59));
}

TEST_CASE("state row names missing and unknown variables") {
  const State s({{"hour", Value::integer(0)}});
  CHECK_THROWS_AS(s.row({"hour", "minute"}), StructuralError);
  const State extra({{"hour", Value::integer(0)}, {"second", Value::integer(1)}});
  CHECK_THROWS_WITH_AS(extra.row({"hour"}), doctest::Contains("second"), StructuralError);
  CHECK_THROWS_AS(State({{"x", Value::integer(0)}, {"x", Value::integer(1)}}), StructuralError);
}

TEST_CASE("interning is stable and value-based") {
  auto u = std::make_shared<Universe>(VariableOrder{"hour", "minute"});
  const auto a = u->intern(hm(3, 4));
  const auto b = u->intern(State({{"minute", Value::integer(4)}, {"hour", Value::integer(3)}}));
  CHECK(a == b);
  CHECK(u->state_count() == 1);
  CHECK(u->state(a).to_string() == "(3,4)");
  CHECK_FALSE(u->find(std::vector<Value>{Value::integer(9), Value::integer(9)}).has_value());
  CHECK_THROWS_AS(Universe(VariableOrder{}), StructuralError);
  CHECK_THROWS_AS(Universe(VariableOrder{"a", "a"}), StructuralError);
}

TEST_CASE("set algebra and sizes") {
  auto u = std::make_shared<Universe>(VariableOrder{"hour", "minute"});
  TransitionSet a(u);
  TransitionSet b(u);
  a.insert(Transition{hm(0, 0), "inc_minute", hm(0, 1)});
  a.insert(Transition{hm(0, 1), "inc_minute", hm(0, 2)});
  b.insert(Transition{hm(0, 1), "inc_minute", hm(0, 2)});
  b.insert(Transition{hm(0, 1), "other", hm(0, 2)});
  CHECK(intersection_size(a, b) == 1);
  CHECK(union_size(a, b) == 3);
  CHECK(set_difference(a, b).size() == 1);
  CHECK(set_size(a) == 10);
  CHECK(pairs_of(b).size() == 1);
  CHECK(set_size(pairs_of(a)) == 8);
  CHECK(labels_of(b) == std::set<std::string>{"inc_minute", "other"});
  CHECK(without_label(b, "other").size() == 1);
  CHECK(with_label(b, "other").size() == 1);
  CHECK(a.contains(Transition{hm(0, 0), "inc_minute", hm(0, 1)}));
  CHECK_FALSE(a.contains(Transition{hm(7, 7), "inc_minute", hm(0, 1)}));

  auto v = std::make_shared<Universe>(VariableOrder{"hour", "minute"});
  TransitionSet foreign(v);
  foreign.insert(Transition{hm(0, 0), "inc_minute", hm(0, 1)});
  CHECK_THROWS_AS(intersection_size(a, foreign), StructuralError);
  CHECK(intersection_size(a, rebase(foreign, u)) == 1);
  CHECK(intersection_size(a, TransitionSet{}) == 0);
}

TEST_CASE("set_size over plain transitions checks variables") {
  const std::vector<Transition> ts{{hm(0, 0), "a", hm(0, 1)}};
  CHECK(set_size(ts, {"hour", "minute"}) == 5);
  CHECK_THROWS_AS(set_size(ts, {"hour"}), StructuralError);
}

TEST_CASE("values order and render") {
  CHECK(Value::integer(-3) < Value::integer(2));
  CHECK(Value::boolean(true).to_string() == "TRUE");
  const auto red = Value::enumerated("COLOUR", "red");
  CHECK(red.to_string() == "red");
  CHECK(red == Value::enumerated("COLOUR", "red"));
  CHECK(red != Value::enumerated("COLOUR", "green"));
  CHECK_THROWS_AS(red.as_integer(), EvalError);
}
