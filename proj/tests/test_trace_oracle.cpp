#include <doctest.h>

#include "normsim/trace_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/naive.hpp"
#include "support/random_gen.hpp"

using namespace normsim;
using namespace normsim::fixtures;

TEST_CASE("trace inclusion holds reflexively") {
    for (const auto& a : {id1(), lin(), tau1(), ndet(), div(), det1()}) {
        auto verdict = trace_inclusion(a, a);
        CHECK(verdict.holds);
        CHECK_FALSE(verdict.witness.has_value());
    }
}

TEST_CASE("trace inclusion reports the shortest witness") {
    auto verdict = trace_inclusion(lin(), tau1());
    CHECK_FALSE(verdict.holds);
    CHECK(verdict.witness == trace({"a", "b"}));

    auto other = trace_inclusion(lin(), det1());
    CHECK_FALSE(other.holds);
    CHECK(other.witness == trace({"a", "b"}));

    CHECK(trace_inclusion(tau1(), lin()).holds);
    CHECK(trace_inclusion(div(), det1()).holds);
}

TEST_CASE("trace equivalence runs both directions") {
    auto [ab, ba] = trace_equivalence(lin(), lin());
    CHECK(ab.holds);
    CHECK(ba.holds);
    auto [fwd, bwd] = trace_equivalence(lin(), det1());
    CHECK_FALSE(fwd.holds);
    CHECK(bwd.holds);
    CHECK(fwd.witness == trace({"a", "b"}));
}

TEST_CASE("witnesses are lexicographically least among the shortest") {
    // Two incomparable failures of the same length: the witness must be the
    // lexicographically smaller one.
    Automaton two({"p0", "p1", "p2"}, {"p0"}, {act("a"), act("b")},
                  {Step{"p0", act("a"), "p1"}, Step{"p0", act("b"), "p2"}});
    Automaton none({"u0"}, {"u0"}, {act("a"), act("b")}, {});
    auto verdict = trace_inclusion(two, none);
    CHECK_FALSE(verdict.holds);
    CHECK(verdict.witness == trace({"a"}));
}

TEST_CASE("oracle agrees with naive enumeration on fixtures and random pairs") {
    std::vector<Automaton> fixtures{id1(), lin(), tau1(), ndet(), div(), det1()};
    for (const auto& a : fixtures) {
        for (const auto& b : fixtures) {
            auto verdict = trace_inclusion(a, b);
            bool naive_holds = true;
            for (const auto& w : naive::words_in(a, 4)) {
                if (!naive::member(b, w)) {
                    naive_holds = false;
                    break;
                }
            }
            CHECK(verdict.holds == naive_holds);
        }
    }

    testgen::Rng rng(1234);
    int disagreements = 0;
    for (int round = 0; round < 1000; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 5;
        opts.max_steps = 8;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        auto verdict = trace_inclusion(a, b);
        if (verdict.holds) {
            // Every bounded trace of a must be a trace of b.
            for (const auto& w : naive::words_in(a, 5)) {
                if (!naive::member(b, w)) {
                    ++disagreements;
                    break;
                }
            }
        } else {
            const Trace& w = *verdict.witness;
            if (!naive::member(a, w) || naive::member(b, w)) {
                ++disagreements;
                continue;
            }
            // Minimality: every strictly smaller word that a can do, b can do.
            for (const auto& v : naive::words_in(a, w.size())) {
                bool smaller = v.size() < w.size() || (v.size() == w.size() && v < w);
                if (smaller && !naive::member(b, v)) {
                    ++disagreements;
                    break;
                }
            }
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("determinize preserves finite traces and is deterministic") {
    testgen::Rng rng(99);
    for (int round = 0; round < 50; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 5;
        opts.max_steps = 9;
        auto a = testgen::random_automaton(rng, opts);
        Automaton d = determinize(a);
        CHECK(is_deterministic(d));
        CHECK(trace_inclusion(a, d).holds);
        CHECK(trace_inclusion(d, a).holds);
    }
}
