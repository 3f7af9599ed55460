#pragma once

#include <optional>

#include "normsim/correspondence.hpp"
#include "normsim/lts.hpp"
#include "normsim/simulation.hpp"

namespace normsim {

struct LiftResult {
    ExecutionFragment fragment;
    IndexRelation relation;
};

// Lifts an execution of the lower automaton along an accepted step
// refinement: matching steps become squares, stutters become left triangles.
LiftResult lift_execution_refinement(const Automaton& a, const Automaton& b,
                                     const PartialStateMap& r, const ExecutionFragment& exec);

// Lifts a finite fragment along an accepted normed forward simulation,
// starting from u related to the fragment's first state. Clause priority is
// match, then stutter, then norm-descending internal step (smallest norm,
// ties by state id).
LiftResult lift_execution_forward(const Automaton& a, const Automaton& b, const Relation& f,
                                  const NormTable& norm, const ExecutionFragment& frag,
                                  const State& u);

// Mirror image of the forward lifting, built right to left from u related to
// the fragment's last state. If the input is an execution, the start
// condition drives a final descent so the result is an execution too.
LiftResult lift_execution_backward(const Automaton& a, const Automaton& b, const Relation& rel,
                                   const NormTable& norm, const ExecutionFragment& frag,
                                   const State& u);

struct Unfolding {
    Automaton automaton;
    PartialStateMap last_map;  // unfolding state -> its last state in the original
    bool truncated = false;    // some execution was cut at the depth bound
};

std::size_t default_unfold_depth(const Automaton& a);

// The automaton whose states are the executions of a with at most depth
// steps; always a forest. Exact when a is acyclic and depth covers its
// longest execution.
Unfolding unfold(const Automaton& a, std::size_t depth);

struct Superposition {
    Automaton automaton;
    PartialStateMap pi1;  // projection to states of the left automaton
    PartialStateMap pi2;  // projection to states of the right automaton
};

// Parallel composition of a and b with the states restricted to rel.
// Requires a start pair in rel.
Superposition superpose(const Automaton& a, const Relation& rel, const Automaton& b);

// The relation pairing each state s of a with every state of b reachable by
// some trace leading to s. Computed exactly by pairing states of a with
// trace-indexed subset states of b; on cyclic a the (unbounded) limit is
// produced, which must be acknowledged with bounded_ok.
Relation canonical_relation(const Automaton& a, const Automaton& b, bool bounded_ok = false);

// Composition of two accepted certificates of the same kind (refinement or
// forward); the forward norm is re-synthesized from the composed relation.
Certificate compose_certificates(const Automaton& a, const Automaton& b, const Automaton& c,
                                 const Certificate& first, const Certificate& second);

// Label- and start-preserving bijection between the reachable subautomata,
// or nullopt. Backtracking search pruned by degree/label signatures.
std::optional<PartialStateMap> check_isomorphism(const Automaton& a, const Automaton& b);

// Reindex a norm table through a projection: the value at a composed state is
// the value at its projection.
NormTable lift_norm_through(const NormTable& norm, const PartialStateMap& projection);

}  // namespace normsim
