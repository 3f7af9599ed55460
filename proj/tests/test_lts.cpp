#include <doctest.h>

#include "normsim/lts.hpp"
#include "support/fixtures.hpp"

using namespace normsim;
using namespace normsim::fixtures;

TEST_CASE("action labels parse and print") {
    CHECK(ActionLabel::tau().str() == "tau");
    CHECK(ActionLabel::parse("tau").is_tau());
    CHECK(ActionLabel::parse("send(1)").name() == "send");
    CHECK(ActionLabel::parse("send(1)").args() == std::vector<std::string>{"1"});
    CHECK(ActionLabel::parse("put(0,1)").args() == std::vector<std::string>{"0", "1"});
    CHECK(ActionLabel::parse("send(1)").str() == "send(1)");
    CHECK(ActionLabel::tau() < ActionLabel::external("a"));
    CHECK_THROWS_AS(ActionLabel::parse("bad("), Error);
    CHECK_THROWS_AS(ActionLabel::external(""), Error);
}

TEST_CASE("automaton invariants are validated") {
    CHECK_THROWS_AS(Automaton({"q0"}, {}, {}, {}), Error);
    CHECK_THROWS_AS(Automaton({"q0"}, {"qX"}, {}, {}), Error);
    CHECK_THROWS_AS(Automaton({"q0"}, {"q0"}, {}, {Step{"q0", act("a"), "q0"}}), Error);
    Automaton a = lin();
    CHECK(a.actions().count(ActionLabel::tau()) == 1);
    CHECK(a.has_step("q0", act("a"), "q1"));
    CHECK(a == lin());
    CHECK_FALSE(a == tau1());
}

TEST_CASE("is_execution_fragment checks consecutive triples") {
    CHECK(is_execution_fragment(lin(), frag({"q0", "a", "q1", "b", "q2"})));
    CHECK_FALSE(is_execution_fragment(lin(), frag({"q0", "b", "q1"})));
    CHECK(is_execution_fragment(div(), frag({"d0", "tau", "d0", "a", "d1"})));
    CHECK(is_execution(lin(), frag({"q0", "a", "q1"})));
    CHECK_FALSE(is_execution(lin(), frag({"q1", "b", "q2"})));
}

TEST_CASE("trace_of drops internal actions") {
    CHECK(trace_of(frag({"q0", "a", "q1", "b", "q2"})) == trace({"a", "b"}));
    CHECK(trace_of(frag({"t0", "tau", "t1", "a", "t2"})) == trace({"a"}));
    CHECK(trace_of(frag({"d0", "tau", "d0", "tau", "d0"})) == Trace{});
}

TEST_CASE("moves interleaves tau closures with letters") {
    CHECK(moves(tau1(), "t0", trace({"a"})) == std::set<State>{"t2"});
    CHECK(moves(lin(), "q0", Trace{}) == std::set<State>{"q0"});
    CHECK(moves(div(), "d0", trace({"a"})) == std::set<State>{"d1"});
    CHECK(moves(lin(), "q0", trace({"a", "b"})) == std::set<State>{"q2"});
    CHECK(moves(lin(), "q0", trace({"b"})).empty());
}

TEST_CASE("reachable_states is the forward closure of the start set") {
    CHECK(reachable_states(lin()) == std::set<State>{"q0", "q1", "q2"});
    Automaton with_isolated({"q0", "q1", "q2", "x"}, {"q0"}, {act("a"), act("b")},
                            {Step{"q0", act("a"), "q1"}, Step{"q1", act("b"), "q2"}});
    CHECK(reachable_states(with_isolated) == std::set<State>{"q0", "q1", "q2"});
    CHECK(reachable_states(div()) == std::set<State>{"d0", "d1"});
}

TEST_CASE("after collects move targets from all start states") {
    CHECK(after(lin(), trace({"a"})) == std::set<State>{"q1"});
    CHECK(after(ndet(), trace({"a"})) == std::set<State>{"n1", "n2"});
    CHECK(after(id1(), Trace{}) == std::set<State>{"q0"});
}

TEST_CASE("past enumerates traces of executions ending in a state") {
    CHECK(past(lin(), "q1", 5) == std::set<Trace>{trace({"a"})});
    CHECK(past(lin(), "q0", 5) == std::set<Trace>{Trace{}});
    // Cyclic automaton beyond the budget requires acknowledgment.
    CHECK_THROWS_AS(past(div(), "d1", 40), BudgetError);
    CHECK(past(div(), "d1", 40, true) == std::set<Trace>{trace({"a"})});
}

TEST_CASE("deterministic per the characterization") {
    CHECK_FALSE(is_deterministic(ndet()));
    CHECK(is_deterministic(div()));  // only tau step is a self-loop
    CHECK_FALSE(is_deterministic(tau1()));
    CHECK(is_deterministic(lin()));
    CHECK(has_fin(ndet()));
}

TEST_CASE("forest per the characterization") {
    CHECK(is_forest(lin()));
    CHECK(is_forest(ndet()));
    CHECK_FALSE(is_forest(div()));  // start state with an incoming step
    Automaton unreachable({"q0", "x"}, {"q0"}, {}, {});
    CHECK_FALSE(is_forest(unreachable));
}

TEST_CASE("finite_traces enumerates bounded traces") {
    CHECK(finite_traces(lin(), 5) ==
          std::set<Trace>{Trace{}, trace({"a"}), trace({"a", "b"})});
    CHECK(finite_traces(id1(), 5) == std::set<Trace>{Trace{}});
    CHECK(finite_traces(div(), 3) == std::set<Trace>{Trace{}, trace({"a"})});
}

TEST_CASE("every finite execution's trace is a bounded finite trace") {
    for (const auto& a : {lin(), tau1(), ndet(), div(), det1()}) {
        for (const auto& exec : enumerate_executions(a, 4)) {
            auto traces = finite_traces(a, exec.length());
            CHECK(traces.count(trace_of(exec)) == 1);
        }
    }
}

TEST_CASE("deterministic automata have functional after") {
    for (const auto& a : {lin(), div(), det1(), id1()}) {
        if (!is_deterministic(a)) {
            continue;
        }
        for (const auto& beta : finite_traces(a, 4)) {
            CHECK(after(a, beta).size() <= 1);
        }
    }
}

TEST_CASE("after is bounded by the state count") {
    for (const auto& a : {lin(), tau1(), ndet(), div()}) {
        for (const auto& beta : finite_traces(a, 4)) {
            CHECK(after(a, beta).size() <= a.states().size());
        }
    }
}

TEST_CASE("forest states have a unique past") {
    for (const auto& a : {lin(), ndet(), det1(), id1()}) {
        REQUIRE(is_forest(a));
        for (const auto& s : reachable_states(a)) {
            CHECK(past(a, s, a.states().size()).size() == 1);
        }
    }
}

TEST_CASE("restrict_to keeps the induced subautomaton") {
    Automaton r = restrict_to(lin(), {"q0", "q1"});
    CHECK(r.states() == std::set<State>{"q0", "q1"});
    CHECK(r.steps().size() == 1);
    CHECK_THROWS_AS(restrict_to(lin(), {"q1", "q2"}), Error);
}

TEST_CASE("fragment prefix and accessors") {
    auto f = frag({"q0", "a", "q1", "b", "q2"});
    CHECK(f.length() == 2);
    CHECK(f.first() == "q0");
    CHECK(f.last() == "q2");
    CHECK(f.state(1) == "q1");
    CHECK(f.action(2) == act("b"));
    CHECK(f.prefix(1) == frag({"q0", "a", "q1"}));
    CHECK(f.str() == "q0 a q1 b q2");
}
