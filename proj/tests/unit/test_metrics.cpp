#include "doctest.h"

#include "corpus.hpp"

#include "bqual/metrics.hpp"

using namespace bqual;

namespace {

struct Clock {
  std::shared_ptr<Universe> universe = std::make_shared<Universe>(VariableOrder{"hour", "minute"});
  ExplorationResult cm1 = explore(corpus_model("CM1.mch"), {}, universe);
};

State xy(std::int64_t x, std::int64_t y) { return State({{"x", Value::integer(x)}, {"y", Value::integer(y)}}); }

}  // namespace

TEST_CASE("exact ratios render both ways") {
  const auto r = Ratio::of(1394, 1440);
  CHECK(r.exact() == "697/720");
  CHECK(r.decimal() == "0.968");
  CHECK(Ratio::of(5, 10).decimal() == "0.500");
  CHECK(Ratio::of(1, 2000).decimal() == "0.001");  // half rounds up
  CHECK(Ratio::of(1, 2001).decimal() == "0.000");
  CHECK(Ratio(1).decimal() == "1.000");
  CHECK(Ratio(1).exact() == "1");
  CHECK(Ratio::parse("1394/1440") == r);
  CHECK_THROWS_AS(Ratio::of(1, 0), MetricError);
  CHECK_THROWS_AS(Ratio::parse("x/2"), InputError);
}

TEST_CASE("CM1 evaluated against itself") {
  Clock c;
  const auto& t = c.cm1.transitions;
  CHECK(tfcomp(t, t) == Ratio(1));
  CHECK(pfcomp(t, t) == Ratio(1));
  CHECK(tfcorr(t, t) == Ratio(1));
  CHECK(pfcorr(t, t) == Ratio(1));
  CHECK(tfappr(t, t) == Ratio(1));
  CHECK(pfappr(t, t) == Ratio(1));
  CHECK(invariant_satisfiability(c.cm1) == Ratio(1));
  CHECK(accountability(c.cm1) == Ratio(1));
  CHECK(availability(c.cm1, labels_of(t)) == Ratio(1));
  CHECK(reusability(t) == Ratio(1) - Ratio::of(3, 1440));
  CHECK(reusability(t).decimal() == "0.998");
  CHECK(capacity(c.cm1) == 2880);
}

TEST_CASE("CM2 functional suitability") {
  Clock c;
  const auto cm2 = explore(corpus_model("CM2.mch"), {}, c.universe);
  const auto& r = c.cm1.transitions;
  const auto& d = cm2.transitions;
  CHECK(tfcomp(d, r) == Ratio::of(1394, 1440));
  CHECK(pfcomp(d, r) == Ratio::of(7062, 7200));
  CHECK(tfcorr(d, r) == Ratio::of(1394, 1417));
  CHECK(pfcorr(d, r) == Ratio::of(7062, 7085));
  CHECK(tfappr(d, r) == Ratio::of(1394, 1440));
  CHECK(pfappr(d, r) == Ratio::of(5645, 5760));
  CHECK(pfcomp(d, r).decimal() == "0.981");
  CHECK(pfcorr(d, r).decimal() == "0.997");
  CHECK(pfappr(d, r).decimal() == "0.980");
}

TEST_CASE("CM3 is appropriate but incomplete") {
  Clock c;
  const auto cm3 = explore(corpus_model("CM3.mch"), {}, c.universe);
  CHECK(tfappr(cm3.transitions, c.cm1.transitions) == Ratio(1));
  CHECK(tfcomp(cm3.transitions, c.cm1.transitions) < Ratio(1));
}

TEST_CASE("CM4 reliability") {
  Clock c;
  const auto cm4 = explore(corpus_model("CM4.mch"), {}, c.universe);
  CHECK(invariant_satisfiability(cm4) == Ratio::of(1440, 1465));
  CHECK(availability(cm4, labels_of(c.cm1.transitions)) == Ratio::of(1, 3));
  CHECK(reusability(cm4.transitions) == Ratio(1) - Ratio::of(3, 1465));
  CHECK(capacity(cm4) == 2930);
}

TEST_CASE("accountability diamond") {
  auto u = std::make_shared<Universe>(VariableOrder{"x", "y"});
  TransitionSet t(u);
  t.insert(Transition{xy(0, 0), "inc_x", xy(1, 0)});
  t.insert(Transition{xy(0, 0), "inc_y", xy(0, 1)});
  t.insert(Transition{xy(0, 1), "inc_x", xy(1, 1)});
  t.insert(Transition{xy(1, 0), "inc_y", xy(1, 1)});
  std::vector<StateId> states;
  for (auto [x, y] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) states.push_back(u->intern(xy(x, y)));
  CHECK(accountability(states, t) == Ratio::of(3, 4));
  CHECK(accountability(std::vector<StateId>{states[0]}, TransitionSet(u)) == Ratio(1));
  CHECK_THROWS_AS(accountability(std::vector<StateId>{}, t), MetricError);
}

TEST_CASE("empty denominators are errors") {
  Clock c;
  const TransitionSet none(c.universe);
  CHECK_THROWS_AS(tfcomp(c.cm1.transitions, none), MetricError);
  CHECK_THROWS_AS(pfcomp(c.cm1.transitions, none), MetricError);
  CHECK_THROWS_AS(tfcorr(none, c.cm1.transitions), MetricError);
  CHECK_THROWS_AS(pfcorr(none, c.cm1.transitions), MetricError);
  CHECK_THROWS_AS(reusability(none), MetricError);
  CHECK_THROWS_AS(fault_tolerance(none, none), MetricError);
  CHECK_THROWS_AS(functional_analysability(none, none), MetricError);
  CHECK_THROWS_AS(availability(c.cm1, {}), MetricError);
  CHECK(tfcomp(none, c.cm1.transitions) == Ratio(0));
  CHECK(fault_analysability(none, none) == Ratio(0));
  CHECK(fault_analysability(c.cm1.transitions, c.cm1.transitions) == Ratio(0));
  CHECK(functional_analysability(c.cm1.transitions, c.cm1.transitions) == Ratio(0));
}

TEST_CASE("weighted modularity") {
  Clock c;
  const auto& t = c.cm1.transitions;
  CHECK(weighted_modularity({{"inc_minute", 1}, {"inc_hour", 1}, {"next_day", 1}}, t) == Ratio(1));
  const auto value = weighted_modularity({{"inc_minute", Ratio(23, 24)}, {"inc_hour", 1}, {"next_day", 1}}, t);
  // 1416/1440 * 23/24 + 23/1440 + 1/1440
  const Ratio expected(1416 * 23 + 24 * 24, 1440 * 24);
  CHECK(value == expected);
  CHECK_THROWS_AS(weighted_modularity({{"inc_minute", 1}}, t), MetricError);
  CHECK(modularity_of("inc_minute", t, t) == Ratio(1));
}

TEST_CASE("goal appropriateness") {
  const auto model = corpus_model("CM1.mch");
  const auto r = explore(model);
  const auto goals = parse_goals(read_file(corpus_path("cm1-goals.txt")), model.ast());
  REQUIRE(goals.goals.size() == 2);
  CHECK(goals.goals[0].name == "G1");
  CHECK(goal_appropriateness(model, r, goals) == Ratio::of(1, 2));
  CHECK_THROWS_AS(goal_appropriateness(model, r, GoalSpec{}), MetricError);
  CHECK(goal_appropriateness(model, r, parse_goals("T: btrue\nU: hour >= 0", model.ast())) == Ratio(1));

  try {
    parse_goals("A: hour < 3\n\nB: hour <", model.ast());
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.where().line == 3);
  }
  CHECK_THROWS_AS(parse_goals("no colon here", model.ast()), SyntaxError);
}

TEST_CASE("learnability") {
  CHECK(learnability(500, 1000) == Ratio::of(1, 2));
  CHECK(learnability(2000, 1000) == Ratio(0));
  CHECK(learnability(0, 1000) == Ratio(1));
  CHECK_THROWS_AS(learnability(1, 0), MetricError);
}
