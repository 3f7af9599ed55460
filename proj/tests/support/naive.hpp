#pragma once

#include <functional>
#include <set>
#include <vector>

#include "normsim/correspondence.hpp"
#include "normsim/lts.hpp"

namespace normsim::naive {

// Independent trace membership: depth-first matching of the word against the
// step graph, where each maximal run of internal steps stays on a simple path
// (a run revisiting a state can be cut out without changing the trace).
inline bool member(const Automaton& a, const Trace& word) {
    const auto& letters = word.labels();
    std::function<bool(const State&, std::size_t, std::set<State>&)> walk =
        [&](const State& s, std::size_t pos, std::set<State>& tau_run) -> bool {
        if (pos == letters.size()) {
            return true;
        }
        for (const auto& step : a.out_steps(s)) {
            if (step.label.is_tau()) {
                if (tau_run.insert(step.dst).second) {
                    if (walk(step.dst, pos, tau_run)) {
                        return true;
                    }
                    tau_run.erase(step.dst);
                }
            } else if (step.label == letters[pos]) {
                std::set<State> fresh{step.dst};
                if (walk(step.dst, pos + 1, fresh)) {
                    return true;
                }
            }
        }
        return false;
    };
    for (const auto& s0 : a.start()) {
        std::set<State> run{s0};
        if (walk(s0, 0, run)) {
            return true;
        }
    }
    return false;
}

// All words over the external alphabet up to the given length that are traces
// of a, by naive per-word membership.
inline std::set<Trace> words_in(const Automaton& a, std::size_t max_len) {
    std::vector<ActionLabel> alphabet;
    for (const auto& label : a.actions()) {
        if (!label.is_tau()) {
            alphabet.push_back(label);
        }
    }
    std::set<Trace> found;
    std::vector<ActionLabel> word;
    std::function<void()> extend = [&]() {
        Trace candidate(word);
        if (member(a, candidate)) {
            found.insert(candidate);
            if (word.size() < max_len) {
                for (const auto& letter : alphabet) {
                    word.push_back(letter);
                    extend();
                    word.pop_back();
                }
            }
        }
        // Extensions of a non-trace are never traces, so prune here.
    };
    extend();
    return found;
}

// Exhaustive existence check for index relations on small grids, enumerating
// every subset of the index grid.
inline bool index_relation_exists_brute(const ExecutionFragment& fa, const ExecutionFragment& fb,
                                        const Relation& rel) {
    const std::size_t rows = fa.length() + 1;
    const std::size_t cols = fb.length() + 1;
    const std::size_t cells = rows * cols;
    if (cells > 20) {
        throw Error("brute force index search limited to 20 grid cells");
    }
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
        IndexRelation idx;
        for (std::size_t cell = 0; cell < cells; ++cell) {
            if (mask & (std::uint64_t{1} << cell)) {
                idx.insert(cell / cols, cell % cols);
            }
        }
        if (check_index_relation(fa, fb, rel, idx).accepted) {
            return true;
        }
    }
    return false;
}

}  // namespace normsim::naive
