#pragma once

#include <string>
#include <vector>

#include "normsim/lts.hpp"

namespace normsim::fixtures {

inline ActionLabel act(const std::string& name) { return ActionLabel::external(name); }

inline Automaton id1() {
    return Automaton({"q0"}, {"q0"}, {act("a")}, {});
}

// q0 -a-> q1 -b-> q2
inline Automaton lin() {
    return Automaton({"q0", "q1", "q2"}, {"q0"}, {act("a"), act("b")},
                     {Step{"q0", act("a"), "q1"}, Step{"q1", act("b"), "q2"}});
}

// t0 -tau-> t1 -a-> t2
inline Automaton tau1() {
    return Automaton({"t0", "t1", "t2"}, {"t0"}, {act("a")},
                     {Step{"t0", ActionLabel::tau(), "t1"}, Step{"t1", act("a"), "t2"}});
}

// n0 -a-> n1, n0 -a-> n2
inline Automaton ndet() {
    return Automaton({"n0", "n1", "n2"}, {"n0"}, {act("a")},
                     {Step{"n0", act("a"), "n1"}, Step{"n0", act("a"), "n2"}});
}

// d0 -tau-> d0, d0 -a-> d1
inline Automaton div() {
    return Automaton({"d0", "d1"}, {"d0"}, {act("a")},
                     {Step{"d0", ActionLabel::tau(), "d0"}, Step{"d0", act("a"), "d1"}});
}

// q0 -a-> q1
inline Automaton det1() {
    return Automaton({"q0", "q1"}, {"q0"}, {act("a")}, {Step{"q0", act("a"), "q1"}});
}

// Builds a fragment from "s0 a s1 b s2" style token lists.
inline ExecutionFragment frag(const std::vector<std::string>& tokens) {
    ExecutionFragment out;
    out.head = tokens.at(0);
    for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
        out.tail.push_back({ActionLabel::parse(tokens[i]), tokens[i + 1]});
    }
    return out;
}

inline Trace trace(const std::vector<std::string>& labels) {
    std::vector<ActionLabel> out;
    for (const auto& label : labels) {
        out.push_back(ActionLabel::parse(label));
    }
    return Trace(out);
}

}  // namespace normsim::fixtures
