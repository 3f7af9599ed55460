#include <doctest.h>

#include "normsim/simulation.hpp"
#include "normsim/trace_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/random_gen.hpp"

using namespace normsim;
using namespace normsim::fixtures;

namespace {

PartialStateMap identity_map(const Automaton& a) {
    std::map<State, State> entries;
    for (const auto& s : a.states()) {
        entries.emplace(s, s);
    }
    return PartialStateMap(entries);
}

Relation identity_rel(const Automaton& a) { return identity_map(a).as_relation(); }

Relation total_rel(const Automaton& a, const Automaton& b) {
    Relation rel;
    for (const auto& s : a.states()) {
        for (const auto& u : b.states()) {
            rel.insert(s, u);
        }
    }
    return rel;
}

}  // namespace

TEST_CASE("identity is a step refinement") {
    CHECK(check_step_refinement(lin(), lin(), identity_map(lin())).accepted);
}

TEST_CASE("step refinement catches unmatched internal steps") {
    PartialStateMap r(std::map<State, State>{{"t0", "q0"}, {"t1", "q1"}, {"t2", "q2"}});
    auto report = check_step_refinement(tau1(), lin(), r);
    REQUIRE_FALSE(report.accepted);
    REQUIRE_FALSE(report.violations.empty());
    CHECK(report.violations[0].step == Step{"t0", ActionLabel::tau(), "t1"});
    CHECK(report.violations[0].condition == "refinement-2a");
}

TEST_CASE("step refinement start condition and domain closure") {
    PartialStateMap missing_start(std::map<State, State>{{"q1", "q1"}, {"q2", "q2"}});
    auto report = check_step_refinement(lin(), lin(), missing_start);
    CHECK_FALSE(report.accepted);
    CHECK(report.violations[0].condition == "refinement-1");

    PartialStateMap open_domain(std::map<State, State>{{"q0", "q0"}});
    auto closure = check_step_refinement(lin(), lin(), open_domain);
    CHECK_FALSE(closure.accepted);
    CHECK(closure.violations[0].condition == "refinement-2");
}

TEST_CASE("malformed certificates raise errors instead of violations") {
    PartialStateMap bogus(std::map<State, State>{{"nope", "q0"}});
    CHECK_THROWS_AS(check_step_refinement(lin(), lin(), bogus), CertificateError);
    Relation bad;
    bad.insert("q0", "nope");
    CHECK_THROWS_AS(check_normed_forward(lin(), lin(), bad, NormTable{}), CertificateError);
}

TEST_CASE("identity relation with zero norm is a normed forward simulation") {
    CHECK(check_normed_forward(lin(), lin(), identity_rel(lin()), NormTable{}).accepted);
}

TEST_CASE("norm descent cannot fire against an irreflexive order") {
    // DET1 against a single tau loop: only clause (c) is available for the
    // a-step, and it needs a strict decrease at the same state.
    Automaton loop({"u0"}, {"u0"}, {act("a")}, {Step{"u0", ActionLabel::tau(), "u0"}});
    auto report = check_normed_forward(det1(), loop, total_rel(det1(), loop), NormTable{});
    REQUIRE_FALSE(report.accepted);
    CHECK(report.violations[0].condition == "forward-2c");
    CHECK(report.violations[0].step == Step{"q0", act("a"), "q1"});
}

TEST_CASE("identity with zero norm is a normed backward simulation") {
    CHECK(check_normed_backward(lin(), lin(), identity_rel(lin()), NormTable{}).accepted);
}

TEST_CASE("backward simulation from the nondeterministic automaton") {
    Relation b;
    b.insert("n0", "q0");
    b.insert("n1", "q1");
    b.insert("n2", "q1");
    CHECK(check_normed_backward(ndet(), det1(), b, NormTable{}).accepted);

    Relation not_total;
    not_total.insert("n0", "q0");
    not_total.insert("n1", "q1");
    auto report = check_normed_backward(ndet(), det1(), not_total, NormTable{});
    REQUIRE_FALSE(report.accepted);
    CHECK(report.violations[0].condition == "backward-total");
    CHECK(report.violations[0].state == "n2");
}

TEST_CASE("image finiteness report") {
    CHECK(check_image_finite(identity_rel(lin())).max_image == 1);
    CHECK(check_image_finite(total_rel(lin(), tau1())).max_image == 3);
    CHECK(check_image_finite(Relation{}).max_image == 0);
    CHECK(check_image_finite(Relation{}).image_finite);
}

TEST_CASE("branching forward accepts certificates the normed checker accepts") {
    CHECK(check_branching_forward(lin(), lin(), identity_rel(lin())).accepted);
    auto report = check_branching_forward(lin(), lin(), Relation{});
    CHECK_FALSE(report.accepted);
    CHECK(report.violations[0].condition == "branching-forward-1");
}

TEST_CASE("norm synthesis from the identity simulation") {
    NormTable norm = norm_from_branching_forward(lin(), lin(), identity_rel(lin()));
    CHECK(norm.get(Step{"q0", act("a"), "q1"}, "q0") == 1);
    CHECK(norm.get(Step{"q1", act("b"), "q2"}, "q1") == 1);
    // Unrelated states read 0.
    CHECK(norm.get(Step{"q0", act("a"), "q1"}, "q2") == 0);
    CHECK(check_normed_forward(lin(), lin(), identity_rel(lin()), norm).accepted);
}

TEST_CASE("norm synthesis requires an accepted branching simulation") {
    CHECK_THROWS_AS(norm_from_branching_forward(lin(), lin(), Relation{}), CertificateError);
    CHECK_THROWS_AS(norm_from_branching_backward(lin(), lin(), Relation{}), CertificateError);
}

TEST_CASE("branching backward mirrors the forward case") {
    CHECK(check_branching_backward(lin(), lin(), identity_rel(lin())).accepted);
    NormTable norm = norm_from_branching_backward(lin(), lin(), identity_rel(lin()));
    CHECK(norm.get(Step{"q0", act("a"), "q1"}, "q1") == 1);
    CHECK(norm.get(NormKey{State{"q0"}}, "q0") == 0);

    Relation b;
    b.insert("n0", "q0");
    b.insert("n1", "q1");
    b.insert("n2", "q1");
    CHECK(check_branching_backward(ndet(), det1(), b).accepted);

    Relation not_total;
    not_total.insert("n0", "q0");
    CHECK_FALSE(check_branching_backward(ndet(), det1(), not_total).accepted);
}

TEST_CASE("tau decorated chain needs a descending norm") {
    // q0 -a-> q1 against u0 -tau-> u1 -a-> u2: the a-step is simulated only
    // after a tau descent, so the zero norm fails and a one-step norm works.
    Relation f;
    f.insert("q0", "u0");
    f.insert("q0", "u1");
    f.insert("q1", "u2");
    CHECK_FALSE(check_normed_forward(det1(), tau1(),
                                     Relation{{{{"q0", "t0"}, {"q0", "t1"}, {"q1", "t2"}}}},
                                     NormTable{})
                    .accepted);
    NormTable norm = norm_from_branching_forward(
        det1(), tau1(), Relation{{{{"q0", "t0"}, {"q0", "t1"}, {"q1", "t2"}}}});
    CHECK(norm.get(Step{"q0", act("a"), "q1"}, "t0") == 2);
    CHECK(norm.get(Step{"q0", act("a"), "q1"}, "t1") == 1);
    CHECK(check_normed_forward(det1(), tau1(),
                               Relation{{{{"q0", "t0"}, {"q0", "t1"}, {"q1", "t2"}}}}, norm)
              .accepted);
}

TEST_CASE("history certificates conjoin refinement and forward components") {
    CHECK(check_history(lin(), lin(), identity_map(lin()), NormTable{}).accepted);

    PartialStateMap r(std::map<State, State>{{"t0", "q0"}, {"t1", "q0"}, {"t2", "q1"}});
    auto report = check_history(lin(), tau1(), r, NormTable{});
    REQUIRE_FALSE(report.accepted);
    bool forward_failure = false;
    for (const auto& v : report.violations) {
        if (v.step == Step{"q1", act("b"), "q2"}) {
            forward_failure = true;
        }
    }
    CHECK(forward_failure);
}

TEST_CASE("prophecy certificates conjoin refinement and backward components") {
    CHECK(check_prophecy(lin(), lin(), identity_map(lin()), NormTable{}).accepted);
    auto report = check_prophecy(lin(), lin(), identity_map(lin()), NormTable{}, true);
    CHECK(report.max_image == 1);

    PartialStateMap not_refinement(std::map<State, State>{{"q0", "q1"}, {"q1", "q0"},
                                                          {"q2", "q2"}});
    CHECK_FALSE(check_prophecy(lin(), lin(), not_refinement, NormTable{}).accepted);
}

TEST_CASE("find_certificate returns the identity refinement on equal automata") {
    auto cert = find_certificate(lin(), lin(), CertificateKind::refinement);
    REQUIRE(cert.has_value());
    const auto& map = std::get<RefinementCert>(*cert).map;
    CHECK(map == identity_map(lin()));
}

TEST_CASE("find_certificate finds a backward certificate for NDET into DET1") {
    auto cert = find_certificate(ndet(), det1(), CertificateKind::backward);
    REQUIRE(cert.has_value());
    const auto& c = std::get<BackwardCert>(*cert);
    CHECK(check_normed_backward(ndet(), det1(), c.rel, c.norm, c.q).accepted);
}

TEST_CASE("find_certificate reports absence") {
    CHECK_FALSE(find_certificate(det1(), id1(), CertificateKind::forward).has_value());
    CHECK_FALSE(find_certificate(det1(), id1(), CertificateKind::refinement).has_value());
    CHECK_THROWS_AS(find_certificate(lin(), lin(), CertificateKind::refinement, 2), BudgetError);
}

TEST_CASE("accepted refinements induce normed forward simulations") {
    // Any accepted refinement map, read as a relation with the zero norm,
    // passes the forward check.
    testgen::Rng rng(21);
    int exercised = 0;
    for (int round = 0; round < 80 && exercised < 25; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 4;
        opts.max_steps = 6;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        auto cert = find_certificate(a, b, CertificateKind::refinement);
        if (!cert) {
            continue;
        }
        ++exercised;
        const auto& map = std::get<RefinementCert>(*cert).map;
        REQUIRE(check_step_refinement(a, b, map).accepted);
        CHECK(check_normed_forward(a, b, map.as_relation(), NormTable{}).accepted);
    }
    CHECK(exercised > 0);
}

TEST_CASE("deterministic upper automata make backward certificates functional") {
    testgen::Rng rng(31);
    int exercised = 0;
    for (int round = 0; round < 120 && exercised < 20; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 4;
        opts.max_steps = 6;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        if (!is_deterministic(b)) {
            b = determinize(b);
        }
        auto cert = find_certificate(a, b, CertificateKind::backward);
        if (!cert) {
            continue;
        }
        ++exercised;
        const auto& rel = std::get<BackwardCert>(*cert).rel;
        std::map<State, State> functional;
        bool unique = true;
        for (const auto& s : reachable_states(a)) {
            auto image = rel.image(s);
            if (image.size() != 1) {
                unique = false;
                break;
            }
            functional.emplace(s, image.front());
        }
        REQUIRE(unique);
        CHECK(check_step_refinement(a, b, PartialStateMap(functional)).accepted);
    }
    CHECK(exercised > 0);
}

TEST_CASE("plain acceptance implies adapted acceptance") {
    testgen::Rng rng(41);
    for (int round = 0; round < 40; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 4;
        opts.max_steps = 6;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        auto forward = find_certificate(a, b, CertificateKind::forward);
        if (forward) {
            const auto& c = std::get<ForwardCert>(*forward);
            CHECK(check_normed_forward(a, b, c.rel, c.norm, CheckMode::adapted).accepted);
        }
        auto backward = find_certificate(a, b, CertificateKind::backward);
        if (backward) {
            const auto& c = std::get<BackwardCert>(*backward);
            CHECK(check_normed_backward(a, b, c.rel, c.norm, c.q, CheckMode::adapted).accepted);
        }
    }
}

TEST_CASE("adapted-accepted refinements restrict to plain-accepted ones") {
    // A refinement violating condition 2 only at unreachable states.
    Automaton a({"q0", "q1", "x", "y"}, {"q0"}, {act("a"), act("c")},
                {Step{"q0", act("a"), "q1"}, Step{"x", act("c"), "y"}});
    Automaton b({"u0", "u1"}, {"u0"}, {act("a"), act("c")}, {Step{"u0", act("a"), "u1"}});
    PartialStateMap r(std::map<State, State>{{"q0", "u0"}, {"q1", "u1"}, {"x", "u0"},
                                             {"y", "u1"}});
    CHECK_FALSE(check_step_refinement(a, b, r).accepted);
    CHECK(check_step_refinement(a, b, r, CheckMode::adapted).accepted);

    // Restricting the domain per the adapted reading gives a plain refinement.
    auto reach_a = reachable_states(a);
    auto reach_b = reachable_states(b);
    std::map<State, State> restricted;
    for (const auto& [s, u] : r.entries()) {
        if (reach_a.count(s) && reach_b.count(u)) {
            restricted.emplace(s, u);
        }
    }
    CHECK(check_step_refinement(a, b, PartialStateMap(restricted)).accepted);
}

TEST_CASE("adapted backward uses Q and reachability guards") {
    // Unreachable state x need not be related in adapted mode.
    Automaton a({"q0", "q1", "x"}, {"q0"}, {act("a")}, {Step{"q0", act("a"), "q1"}});
    Relation rel;
    rel.insert("q0", "q0");
    rel.insert("q1", "q1");
    CHECK_FALSE(check_normed_backward(a, det1(), rel, NormTable{}).accepted);
    CHECK(check_normed_backward(a, det1(), rel, NormTable{}, std::nullopt, CheckMode::adapted)
              .accepted);

    // Q excluding the only related state breaks adapted condition 3.
    std::optional<std::set<State>> q{{"q0"}};
    CHECK_FALSE(
        check_normed_backward(a, det1(), rel, NormTable{}, q, CheckMode::adapted).accepted);
}

TEST_CASE("violation report respects the cap") {
    Relation empty;
    Automaton a({"p0", "p1", "p2", "p3"}, {"p0", "p1", "p2", "p3"}, {}, {});
    auto report = check_normed_backward(a, det1(), empty, NormTable{}, std::nullopt,
                                        CheckMode::plain, 2);
    CHECK_FALSE(report.accepted);
    CHECK(report.violations.size() == 2);
    CHECK(report.truncated);
}

TEST_CASE("normed and branching checks agree through synthesized norms") {
    testgen::Rng rng(51);
    for (int round = 0; round < 60; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 4;
        opts.max_steps = 7;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);

        auto f = (round % 2 == 0) ? testgen::random_relation(rng, a, b)
                                  : greatest_branching_forward(a, b);
        bool branching = check_branching_forward(a, b, f).accepted;
        bool normed =
            check_normed_forward(a, b, f, branching_forward_distances(a, b, f)).accepted;
        CHECK(branching == normed);

        auto rel = (round % 2 == 0) ? testgen::random_total_relation(rng, a, b)
                                    : greatest_branching_backward(a, b);
        bool bbranching = check_branching_backward(a, b, rel).accepted;
        bool bnormed =
            check_normed_backward(a, b, rel, branching_backward_distances(a, b, rel)).accepted;
        CHECK(bbranching == bnormed);
    }
}

TEST_CASE("found certificates are sound for trace inclusion") {
    testgen::Rng rng(61);
    for (int round = 0; round < 60; ++round) {
        testgen::AutomatonOptions opts;
        opts.max_states = 5;
        opts.max_steps = 8;
        auto a = testgen::random_automaton(rng, opts);
        opts.prefix = "u";
        auto b = testgen::random_automaton(rng, opts);
        for (auto kind : {CertificateKind::forward, CertificateKind::backward}) {
            auto cert = find_certificate(a, b, kind);
            if (cert) {
                CHECK(trace_inclusion(a, b).holds);
            }
        }
    }
}
