#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "normsim/lts.hpp"

namespace normsim::testgen {

// Thin wrapper so tests stay deterministic across standard libraries: all
// draws go through the raw engine, never through distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

private:
    std::mt19937_64 engine_;
};

struct AutomatonOptions {
    std::size_t max_states = 6;
    std::size_t max_steps = 10;
    bool allow_tau = true;
    bool acyclic = false;
    std::size_t max_starts = 2;
    std::string prefix = "s";
};

inline Automaton random_automaton(Rng& rng, const AutomatonOptions& opts = {}) {
    std::size_t n = 1 + rng.below(opts.max_states);
    std::set<State> states;
    std::vector<State> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(opts.prefix + std::to_string(i));
        states.insert(ids.back());
    }
    std::set<State> start{ids[0]};
    for (std::size_t i = 1; i < n && start.size() < opts.max_starts; ++i) {
        if (rng.chance(1, 5)) {
            start.insert(ids[i]);
        }
    }
    std::vector<ActionLabel> labels{ActionLabel::external("a"), ActionLabel::external("b")};
    std::set<ActionLabel> actions(labels.begin(), labels.end());
    if (opts.allow_tau) {
        labels.push_back(ActionLabel::tau());
    }
    std::set<Step> steps;
    std::size_t want = rng.below(opts.max_steps + 1);
    for (std::size_t k = 0; k < 4 * want && steps.size() < want; ++k) {
        std::size_t src = rng.below(n);
        std::size_t dst = rng.below(n);
        if (opts.acyclic) {
            if (src == dst) {
                continue;
            }
            if (src > dst) {
                std::swap(src, dst);
            }
        }
        steps.insert(Step{ids[src], labels[rng.below(labels.size())], ids[dst]});
    }
    return Automaton(std::move(states), std::move(start), std::move(actions), std::move(steps));
}

inline Relation random_relation(Rng& rng, const Automaton& a, const Automaton& b,
                                std::uint64_t keep_num = 1, std::uint64_t keep_den = 2) {
    Relation rel;
    for (const auto& s : a.states()) {
        for (const auto& u : b.states()) {
            if (rng.chance(keep_num, keep_den)) {
                rel.insert(s, u);
            }
        }
    }
    return rel;
}

inline Relation random_total_relation(Rng& rng, const Automaton& a, const Automaton& b) {
    Relation rel = random_relation(rng, a, b);
    std::vector<State> b_states(b.states().begin(), b.states().end());
    for (const auto& s : a.states()) {
        if (rel.image(s).empty()) {
            rel.insert(s, b_states[rng.below(b_states.size())]);
        }
    }
    return rel;
}

// Random execution of at most max_steps steps, stopping early at dead ends.
inline ExecutionFragment random_execution(Rng& rng, const Automaton& a, std::size_t max_steps) {
    std::vector<State> starts(a.start().begin(), a.start().end());
    ExecutionFragment exec;
    exec.head = starts[rng.below(starts.size())];
    for (std::size_t i = 0; i < max_steps; ++i) {
        const auto& outs = a.out_steps(exec.last());
        if (outs.empty() || rng.chance(1, 6)) {
            break;
        }
        const Step& step = outs[rng.below(outs.size())];
        exec.tail.push_back({step.label, step.dst});
    }
    return exec;
}

// A pair (A, B) with ftraces(A) included in ftraces(B) by construction: B is a
// quotient of A under a random state partition, with extra random steps.
inline std::pair<Automaton, Automaton> random_inclusion_pair(Rng& rng,
                                                             const AutomatonOptions& opts = {}) {
    Automaton a = random_automaton(rng, opts);
    std::vector<State> ids(a.states().begin(), a.states().end());
    std::size_t classes = 1 + rng.below(ids.size());
    std::map<State, State> quotient;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        quotient[ids[i]] = "m" + std::to_string(rng.below(classes));
    }
    std::set<State> states;
    std::set<State> start;
    std::set<Step> steps;
    for (const auto& [s, m] : quotient) {
        states.insert(m);
    }
    for (const auto& s : a.start()) {
        start.insert(quotient[s]);
    }
    for (const auto& step : a.steps()) {
        steps.insert(Step{quotient[step.src], step.label, quotient[step.dst]});
    }
    std::vector<State> merged(states.begin(), states.end());
    std::vector<ActionLabel> labels{ActionLabel::external("a"), ActionLabel::external("b"),
                                    ActionLabel::tau()};
    std::size_t extra = rng.below(4);
    for (std::size_t k = 0; k < extra; ++k) {
        steps.insert(Step{merged[rng.below(merged.size())], labels[rng.below(labels.size())],
                          merged[rng.below(merged.size())]});
    }
    Automaton b(std::move(states), std::move(start), a.actions(), std::move(steps));
    return {std::move(a), std::move(b)};
}

}  // namespace normsim::testgen
