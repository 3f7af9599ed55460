#include <doctest.h>

#include "normsim/correspondence.hpp"
#include "support/fixtures.hpp"
#include "support/naive.hpp"
#include "support/random_gen.hpp"

using namespace normsim;
using namespace normsim::fixtures;

namespace {

Relation rel(const std::vector<std::pair<State, State>>& pairs) {
    Relation out;
    for (const auto& [s, u] : pairs) {
        out.insert(s, u);
    }
    return out;
}

IndexRelation idx(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    IndexRelation out;
    for (const auto& [i, j] : pairs) {
        out.insert(i, j);
    }
    return out;
}

}  // namespace

TEST_CASE("check_index_relation accepts a square with equal labels") {
    auto fa = frag({"q0", "a", "q1"});
    auto fb = frag({"u0", "a", "u1"});
    auto r = rel({{"q0", "u0"}, {"q1", "u1"}});
    CHECK(check_index_relation(fa, fb, r, idx({{0, 0}, {1, 1}})).accepted);

    auto verdict = check_index_relation(fa, fb, r, idx({{0, 0}}));
    CHECK_FALSE(verdict.accepted);
    CHECK(*verdict.violated == IndexCondition::total_left);
}

TEST_CASE("check_index_relation validates tau triangles") {
    auto fa = frag({"t0", "tau", "t1", "a", "t2"});
    auto fb = frag({"u0", "a", "u1"});
    auto r = rel({{"t0", "u0"}, {"t1", "u0"}, {"t2", "u1"}});
    CHECK(check_index_relation(fa, fb, r, idx({{0, 0}, {1, 0}, {2, 1}})).accepted);
}

TEST_CASE("check_index_relation names the first violated condition") {
    auto fa = frag({"q0", "a", "q1"});
    auto fb = frag({"u0", "a", "u1"});
    auto everything = rel({{"q0", "u0"}, {"q0", "u1"}, {"q1", "u0"}, {"q1", "u1"}});

    auto unrelated = check_index_relation(fa, fb, rel({{"q0", "u0"}}), idx({{0, 0}, {1, 1}}));
    CHECK(*unrelated.violated == IndexCondition::states_related);
    CHECK(*unrelated.witness == IndexRelation::Pair{1, 1});

    auto nonmono =
        check_index_relation(fa, fb, everything, idx({{0, 1}, {1, 0}, {0, 0}, {1, 1}}));
    CHECK(*nonmono.violated == IndexCondition::monotone);

    auto right = check_index_relation(fa, fb, everything, idx({{0, 0}, {1, 0}, {1, 1}}));
    CHECK(*right.violated == IndexCondition::left_triangle_tau);

    auto square = check_index_relation(frag({"q0", "a", "q1"}), frag({"u0", "b", "u1"}),
                                       everything, idx({{0, 0}, {1, 1}}));
    CHECK(*square.violated == IndexCondition::square_label);

    auto out_of_bounds = check_index_relation(fa, fb, everything, idx({{0, 0}, {1, 1}, {5, 1}}));
    CHECK_FALSE(out_of_bounds.accepted);
    CHECK(*out_of_bounds.violated == IndexCondition::states_related);
}

TEST_CASE("find_correspondence solves the triangle example") {
    auto fa = frag({"t0", "tau", "t1", "a", "t2"});
    auto fb = frag({"u0", "a", "u1"});
    auto r = rel({{"t0", "u0"}, {"t1", "u0"}, {"t2", "u1"}});
    auto found = find_correspondence(fa, fb, r);
    REQUIRE(found.has_value());
    CHECK(*found == idx({{0, 0}, {1, 0}, {2, 1}}));
    CHECK(check_index_relation(fa, fb, r, *found).accepted);
}

TEST_CASE("find_correspondence fails on empty relations and unequal traces") {
    auto fa = frag({"q0", "a", "q1"});
    auto fb = frag({"u0", "a", "u1"});
    CHECK_FALSE(find_correspondence(fa, fb, Relation{}).has_value());

    auto everything = rel({{"q0", "u0"}, {"q0", "u1"}, {"q1", "u0"}, {"q1", "u1"}});
    CHECK_FALSE(
        find_correspondence(frag({"q0", "a", "q1"}), frag({"u0", "b", "u1"}), everything)
            .has_value());
}

TEST_CASE("find_correspondence agrees with exhaustive enumeration") {
    testgen::Rng rng(7);
    for (int round = 0; round < 60; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 3;
        opts.max_steps = 5;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        auto fa = testgen::random_execution(rng, a, 3);
        auto fb = testgen::random_execution(rng, b, 3);
        auto r = testgen::random_relation(rng, a, b);
        auto found = find_correspondence(fa, fb, r);
        if (found) {
            CHECK(check_index_relation(fa, fb, r, *found).accepted);
        }
        CHECK(found.has_value() == naive::index_relation_exists_brute(fa, fb, r));
    }
}

TEST_CASE("prefix traces agree on related indices") {
    // Lemma: (i, j) related implies the prefixes have the same trace.
    testgen::Rng rng(11);
    for (int round = 0; round < 40; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 4;
        opts.max_steps = 7;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        auto fa = testgen::random_execution(rng, a, 4);
        auto fb = testgen::random_execution(rng, b, 4);
        auto r = testgen::random_relation(rng, a, b, 2, 3);
        auto found = find_correspondence(fa, fb, r);
        if (!found) {
            continue;
        }
        for (const auto& [i, j] : found->pairs()) {
            CHECK(trace_of(fa.prefix(i)) == trace_of(fb.prefix(j)));
        }
    }
}

TEST_CASE("reduce follows the canonical pair sequence") {
    auto fa = frag({"s0", "tau", "s1"});
    auto fb = frag({"u0", "tau", "u1"});
    auto result = reduce_index_relation(fa, fb, idx({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    CHECK(result.relation == idx({{0, 0}, {1, 1}}));
    CHECK(result.prefix == fb);
}

TEST_CASE("reduce keeps already reduced relations") {
    auto fa = frag({"q0", "a", "q1"});
    auto fb = frag({"u0", "a", "u1"});
    auto input = idx({{0, 0}, {1, 1}});
    auto result = reduce_index_relation(fa, fb, input);
    CHECK(result.relation == input);
    CHECK(result.prefix == fb);
}

TEST_CASE("reduce cuts the second fragment at the matched final index") {
    auto fa = frag({"s0"});
    auto fb = frag({"u0", "tau", "u1"});
    auto result = reduce_index_relation(fa, fb, idx({{0, 0}, {0, 1}}));
    CHECK(result.prefix == frag({"u0"}));
    CHECK(result.relation == idx({{0, 0}}));
}

TEST_CASE("reduce rejects invalid inputs") {
    auto fa = frag({"q0", "a", "q1"});
    auto fb = frag({"u0", "a", "u1"});
    CHECK_THROWS_AS(reduce_index_relation(fa, fb, idx({{0, 0}})), CertificateError);
}

TEST_CASE("compose_index_relations is relational composition") {
    CHECK(compose_index_relations(idx({{0, 0}, {1, 1}}), idx({{0, 0}, {1, 1}})) ==
          idx({{0, 0}, {1, 1}}));
    CHECK(compose_index_relations(IndexRelation{}, idx({{0, 0}})) == IndexRelation{});
    CHECK(compose_index_relations(idx({{0, 0}, {1, 1}}), idx({{0, 0}, {1, 0}})) ==
          idx({{0, 0}, {1, 0}}));
}
