#include "normsim/trace_oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace normsim {

namespace {

using StateSet = std::vector<State>;  // sorted, unique

StateSet tau_closure(const Automaton& a, StateSet states) {
    std::set<State> seen(states.begin(), states.end());
    std::deque<State> queue(states.begin(), states.end());
    while (!queue.empty()) {
        State cur = queue.front();
        queue.pop_front();
        for (const auto& step : a.out_steps(cur)) {
            if (step.label.is_tau() && seen.insert(step.dst).second) {
                queue.push_back(step.dst);
            }
        }
    }
    return StateSet(seen.begin(), seen.end());
}

StateSet letter_image(const Automaton& a, const StateSet& states, const ActionLabel& letter) {
    std::set<State> image;
    for (const auto& s : states) {
        for (const auto& step : a.out_steps(s)) {
            if (step.label == letter) {
                image.insert(step.dst);
            }
        }
    }
    return StateSet(image.begin(), image.end());
}

StateSet start_closure(const Automaton& a) {
    return tau_closure(a, StateSet(a.start().begin(), a.start().end()));
}

}  // namespace

InclusionVerdict trace_inclusion(const Automaton& a, const Automaton& b) {
    // Nodes pair the set of A-states reachable with the current trace with
    // the corresponding set of B-states. A node with an empty B side refutes
    // inclusion; its trace is the witness.
    using Node = std::pair<StateSet, StateSet>;

    struct QueueEntry {
        std::vector<ActionLabel> trace;
        Node node;
    };
    auto later = [](const QueueEntry& lhs, const QueueEntry& rhs) {
        if (lhs.trace.size() != rhs.trace.size()) {
            return lhs.trace.size() > rhs.trace.size();
        }
        if (lhs.trace != rhs.trace) {
            return lhs.trace > rhs.trace;
        }
        return lhs.node > rhs.node;
    };
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(later)> queue(later);
    std::set<Node> visited;
    std::map<StateSet, std::map<ActionLabel, StateSet>> b_step_cache;

    queue.push({{}, {start_closure(a), start_closure(b)}});
    while (!queue.empty()) {
        auto entry = queue.top();
        queue.pop();
        if (!visited.insert(entry.node).second) {
            continue;
        }
        const auto& [sa, sb] = entry.node;
        if (sb.empty()) {
            return InclusionVerdict{false, Trace(entry.trace)};
        }
        // Candidate letters: external labels enabled somewhere in the A side.
        std::set<ActionLabel> letters;
        for (const auto& s : sa) {
            for (const auto& step : a.out_steps(s)) {
                if (!step.label.is_tau()) {
                    letters.insert(step.label);
                }
            }
        }
        for (const auto& letter : letters) {
            StateSet next_a = tau_closure(a, letter_image(a, sa, letter));
            auto& cached = b_step_cache[sb];
            auto it = cached.find(letter);
            if (it == cached.end()) {
                it = cached.emplace(letter, tau_closure(b, letter_image(b, sb, letter))).first;
            }
            Node next{std::move(next_a), it->second};
            if (!visited.count(next)) {
                auto trace = entry.trace;
                trace.push_back(letter);
                queue.push({std::move(trace), std::move(next)});
            }
        }
    }
    return InclusionVerdict{true, std::nullopt};
}

std::pair<InclusionVerdict, InclusionVerdict> trace_equivalence(const Automaton& a,
                                                                const Automaton& b) {
    return {trace_inclusion(a, b), trace_inclusion(b, a)};
}

Automaton determinize(const Automaton& a) {
    auto subset_name = [](const StateSet& states) {
        std::string out = "{";
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (i > 0) {
                out += "+";
            }
            out += states[i];
        }
        return out + "}";
    };

    StateSet initial = start_closure(a);
    std::map<StateSet, std::string> names;
    names[initial] = subset_name(initial);
    std::deque<StateSet> queue{initial};
    std::set<Step> steps;
    std::set<ActionLabel> actions(a.actions().begin(), a.actions().end());
    while (!queue.empty()) {
        StateSet cur = queue.front();
        queue.pop_front();
        std::set<ActionLabel> letters;
        for (const auto& s : cur) {
            for (const auto& step : a.out_steps(s)) {
                if (!step.label.is_tau()) {
                    letters.insert(step.label);
                }
            }
        }
        for (const auto& letter : letters) {
            StateSet next = tau_closure(a, letter_image(a, cur, letter));
            if (next.empty()) {
                continue;
            }
            auto [it, inserted] = names.emplace(next, subset_name(next));
            if (inserted) {
                queue.push_back(next);
            }
            steps.insert(Step{names[cur], letter, it->second});
        }
    }
    std::set<State> states;
    for (const auto& [subset, name] : names) {
        states.insert(name);
    }
    return Automaton(std::move(states), {names[initial]}, std::move(actions), std::move(steps));
}

}  // namespace normsim
