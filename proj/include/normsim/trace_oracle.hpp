#pragma once

#include <optional>
#include <utility>

#include "normsim/lts.hpp"

namespace normsim {

struct InclusionVerdict {
    bool holds = false;
    std::optional<Trace> witness;  // shortest trace in ftraces(A) \ ftraces(B)
};

// Exact decision of ftraces(A) subseteq ftraces(B) via a product of
// tau-closed subset states on both sides. The witness, if any, is the
// shortest failing trace, ties broken lexicographically.
InclusionVerdict trace_inclusion(const Automaton& a, const Automaton& b);

std::pair<InclusionVerdict, InclusionVerdict> trace_equivalence(const Automaton& a,
                                                                const Automaton& b);

// Subset construction with tau-closure. The result is deterministic, has no
// tau-steps, and has the same finite traces as the input.
Automaton determinize(const Automaton& a);

}  // namespace normsim
