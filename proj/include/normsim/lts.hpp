#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normsim/errors.hpp"

namespace normsim {

using State = std::string;

// An action label: either the internal action tau or an external action with
// a name and a list of ground argument values.
class ActionLabel {
public:
    ActionLabel() = default;  // tau
    static ActionLabel tau() { return ActionLabel{}; }
    static ActionLabel external(std::string name, std::vector<std::string> args = {});

    bool is_tau() const { return name_.empty(); }
    const std::string& name() const { return name_; }
    const std::vector<std::string>& args() const { return args_; }

    // Token form: "tau", "a", "send(1)", "put(0,1)".
    std::string str() const;
    static ActionLabel parse(const std::string& token);

    auto operator<=>(const ActionLabel&) const = default;

private:
    std::string name_;  // empty means tau
    std::vector<std::string> args_;
};

struct Step {
    State src;
    ActionLabel label;
    State dst;

    auto operator<=>(const Step&) const = default;
};

// Immutable finite labeled transition system. State ids are opaque strings;
// the action set always contains tau; equality is structural.
class Automaton {
public:
    Automaton(std::set<State> states, std::set<State> start, std::set<ActionLabel> actions,
              std::set<Step> steps);

    const std::set<State>& states() const { return states_; }
    const std::set<State>& start() const { return start_; }
    const std::set<ActionLabel>& actions() const { return actions_; }
    const std::set<Step>& steps() const { return steps_; }

    bool has_state(const State& s) const { return states_.count(s) != 0; }
    bool is_start(const State& s) const { return start_.count(s) != 0; }
    bool has_step(const State& s, const ActionLabel& a, const State& t) const;
    const std::vector<Step>& out_steps(const State& s) const;
    const std::vector<Step>& in_steps(const State& s) const;

    bool operator==(const Automaton& other) const;

private:
    std::set<State> states_;
    std::set<State> start_;
    std::set<ActionLabel> actions_;
    std::set<Step> steps_;
    std::map<State, std::vector<Step>> out_;
    std::map<State, std::vector<Step>> in_;
    static const std::vector<Step> no_steps_;
};

// Finite alternating state/action sequence. head is the first state; each
// tail element appends one step. Validity against an automaton is checked by
// is_execution_fragment, not by construction.
struct ExecutionFragment {
    State head;
    std::vector<std::pair<ActionLabel, State>> tail;

    std::size_t length() const { return tail.size(); }  // number of steps
    const State& first() const { return head; }
    const State& last() const { return tail.empty() ? head : tail.back().second; }
    // States are indexed 0..length(); actions 1..length().
    const State& state(std::size_t i) const { return i == 0 ? head : tail[i - 1].second; }
    const ActionLabel& action(std::size_t i) const { return tail[i - 1].first; }

    ExecutionFragment prefix(std::size_t num_steps) const;
    std::string str() const;

    auto operator<=>(const ExecutionFragment&) const = default;
};

// Finite sequence of external actions; never contains tau.
class Trace {
public:
    Trace() = default;
    explicit Trace(std::vector<ActionLabel> labels);

    const std::vector<ActionLabel>& labels() const { return labels_; }
    bool empty() const { return labels_.empty(); }
    std::size_t size() const { return labels_.size(); }
    std::string str() const;  // space-separated label tokens, "" for the empty trace

    auto operator<=>(const Trace&) const = default;

private:
    std::vector<ActionLabel> labels_;
};

class Relation {
public:
    Relation() = default;
    explicit Relation(std::set<std::pair<State, State>> pairs) : pairs_(std::move(pairs)) {}

    const std::set<std::pair<State, State>>& pairs() const { return pairs_; }
    bool contains(const State& s, const State& u) const { return pairs_.count({s, u}) != 0; }
    void insert(const State& s, const State& u) { pairs_.insert({s, u}); }
    void erase(const State& s, const State& u) { pairs_.erase({s, u}); }
    bool empty() const { return pairs_.empty(); }
    std::size_t size() const { return pairs_.size(); }

    std::vector<State> image(const State& s) const;
    std::vector<State> preimage(const State& u) const;
    Relation inverse() const;

    bool operator==(const Relation&) const = default;

private:
    std::set<std::pair<State, State>> pairs_;
};

class PartialStateMap {
public:
    PartialStateMap() = default;
    explicit PartialStateMap(std::map<State, State> entries) : entries_(std::move(entries)) {}

    const std::map<State, State>& entries() const { return entries_; }
    bool defined_at(const State& s) const { return entries_.count(s) != 0; }
    const State& at(const State& s) const;
    std::optional<State> get(const State& s) const;
    void set(const State& s, const State& u) { entries_[s] = u; }
    std::size_t size() const { return entries_.size(); }

    Relation as_relation() const;
    Relation inverse() const;  // the inverse viewed as a relation

    bool operator==(const PartialStateMap&) const = default;

private:
    std::map<State, State> entries_;
};

bool is_execution_fragment(const Automaton& a, const ExecutionFragment& frag);
// An execution is a fragment that begins in a start state.
bool is_execution(const Automaton& a, const ExecutionFragment& frag);

Trace trace_of(const ExecutionFragment& frag);

// All states t with s ==beta==> t: breadth-first search interleaving
// tau-closures with the letters of beta, memoized on (state, position).
std::set<State> moves(const Automaton& a, const State& s, const Trace& beta);

std::set<State> reachable_states(const Automaton& a);

std::set<State> after(const Automaton& a, const Trace& beta);

inline constexpr std::size_t kPastDepthBudget = 16;

// Traces of executions of length <= depth that end in s. Exact when a is
// acyclic and depth >= |states(a)|. On cyclic automata a depth beyond the
// budget must be acknowledged with bounded_ok.
std::set<Trace> past(const Automaton& a, const State& s, std::size_t depth,
                     bool bounded_ok = false);

bool is_deterministic(const Automaton& a);
bool has_fin(const Automaton& a);
bool is_forest(const Automaton& a);
bool is_acyclic(const Automaton& a);

std::set<Trace> finite_traces(const Automaton& a, std::size_t depth);

// All executions with at most depth steps, in depth-first order from the
// sorted start set.
std::vector<ExecutionFragment> enumerate_executions(const Automaton& a, std::size_t depth);

// Sub-automaton on the given states (steps with both endpoints kept).
// Throws if no start state survives.
Automaton restrict_to(const Automaton& a, const std::set<State>& keep);

std::set<State> tau_closure(const Automaton& a, const std::set<State>& states);
std::set<State> step_image(const Automaton& a, const std::set<State>& states,
                           const ActionLabel& letter);

}  // namespace normsim
