#include "normsim/lts.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace normsim {

const std::vector<Step> Automaton::no_steps_{};

ActionLabel ActionLabel::external(std::string name, std::vector<std::string> args) {
    if (name.empty()) {
        throw Error("external action name must be nonempty");
    }
    ActionLabel label;
    label.name_ = std::move(name);
    label.args_ = std::move(args);
    return label;
}

std::string ActionLabel::str() const {
    if (is_tau()) {
        return "tau";
    }
    if (args_.empty()) {
        return name_;
    }
    std::string out = name_ + "(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += args_[i];
    }
    out += ")";
    return out;
}

ActionLabel ActionLabel::parse(const std::string& token) {
    if (token == "tau") {
        return tau();
    }
    auto open = token.find('(');
    if (open == std::string::npos) {
        if (token.empty()) {
            throw Error("empty action token");
        }
        return external(token);
    }
    if (token.back() != ')' || open == 0) {
        throw Error("malformed action token: " + token);
    }
    std::string name = token.substr(0, open);
    std::string inner = token.substr(open + 1, token.size() - open - 2);
    std::vector<std::string> args;
    std::string cur;
    for (char c : inner) {
        if (c == ',') {
            args.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!inner.empty()) {
        args.push_back(cur);
    }
    for (const auto& arg : args) {
        if (arg.empty()) {
            throw Error("malformed action token: " + token);
        }
    }
    return external(name, args);
}

Automaton::Automaton(std::set<State> states, std::set<State> start, std::set<ActionLabel> actions,
                     std::set<Step> steps)
    : states_(std::move(states)),
      start_(std::move(start)),
      actions_(std::move(actions)),
      steps_(std::move(steps)) {
    actions_.insert(ActionLabel::tau());
    if (start_.empty()) {
        throw Error("automaton must have at least one start state");
    }
    for (const auto& s : start_) {
        if (!states_.count(s)) {
            throw Error("start state not declared: " + s);
        }
    }
    for (const auto& step : steps_) {
        if (!states_.count(step.src)) {
            throw Error("step source not declared: " + step.src);
        }
        if (!states_.count(step.dst)) {
            throw Error("step target not declared: " + step.dst);
        }
        if (!actions_.count(step.label)) {
            throw Error("step label not declared: " + step.label.str());
        }
        out_[step.src].push_back(step);
        in_[step.dst].push_back(step);
    }
}

bool Automaton::has_step(const State& s, const ActionLabel& a, const State& t) const {
    return steps_.count(Step{s, a, t}) != 0;
}

const std::vector<Step>& Automaton::out_steps(const State& s) const {
    auto it = out_.find(s);
    return it == out_.end() ? no_steps_ : it->second;
}

const std::vector<Step>& Automaton::in_steps(const State& s) const {
    auto it = in_.find(s);
    return it == in_.end() ? no_steps_ : it->second;
}

bool Automaton::operator==(const Automaton& other) const {
    return states_ == other.states_ && start_ == other.start_ && actions_ == other.actions_ &&
           steps_ == other.steps_;
}

ExecutionFragment ExecutionFragment::prefix(std::size_t num_steps) const {
    ExecutionFragment out;
    out.head = head;
    out.tail.assign(tail.begin(), tail.begin() + std::min(num_steps, tail.size()));
    return out;
}

std::string ExecutionFragment::str() const {
    std::string out = head;
    for (const auto& [label, state] : tail) {
        out += " " + label.str() + " " + state;
    }
    return out;
}

Trace::Trace(std::vector<ActionLabel> labels) : labels_(std::move(labels)) {
    for (const auto& label : labels_) {
        if (label.is_tau()) {
            throw Error("trace must not contain tau");
        }
    }
}

std::string Trace::str() const {
    std::string out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i > 0) {
            out += " ";
        }
        out += labels_[i].str();
    }
    return out;
}

std::vector<State> Relation::image(const State& s) const {
    std::vector<State> out;
    for (auto it = pairs_.lower_bound({s, ""}); it != pairs_.end() && it->first == s; ++it) {
        out.push_back(it->second);
    }
    return out;
}

std::vector<State> Relation::preimage(const State& u) const {
    std::vector<State> out;
    for (const auto& [s, v] : pairs_) {
        if (v == u) {
            out.push_back(s);
        }
    }
    return out;
}

Relation Relation::inverse() const {
    Relation out;
    for (const auto& [s, u] : pairs_) {
        out.insert(u, s);
    }
    return out;
}

const State& PartialStateMap::at(const State& s) const {
    auto it = entries_.find(s);
    if (it == entries_.end()) {
        throw Error("partial state map undefined at: " + s);
    }
    return it->second;
}

std::optional<State> PartialStateMap::get(const State& s) const {
    auto it = entries_.find(s);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Relation PartialStateMap::as_relation() const {
    Relation out;
    for (const auto& [s, u] : entries_) {
        out.insert(s, u);
    }
    return out;
}

Relation PartialStateMap::inverse() const {
    Relation out;
    for (const auto& [s, u] : entries_) {
        out.insert(u, s);
    }
    return out;
}

bool is_execution_fragment(const Automaton& a, const ExecutionFragment& frag) {
    if (!a.has_state(frag.head)) {
        return false;
    }
    State cur = frag.head;
    for (const auto& [label, next] : frag.tail) {
        if (!a.has_step(cur, label, next)) {
            return false;
        }
        cur = next;
    }
    return true;
}

bool is_execution(const Automaton& a, const ExecutionFragment& frag) {
    return a.is_start(frag.head) && is_execution_fragment(a, frag);
}

Trace trace_of(const ExecutionFragment& frag) {
    std::vector<ActionLabel> labels;
    for (const auto& [label, state] : frag.tail) {
        if (!label.is_tau()) {
            labels.push_back(label);
        }
    }
    return Trace(std::move(labels));
}

std::set<State> moves(const Automaton& a, const State& s, const Trace& beta) {
    if (!a.has_state(s)) {
        throw Error("moves: unknown state " + s);
    }
    const auto& letters = beta.labels();
    std::set<std::pair<State, std::size_t>> visited;
    std::deque<std::pair<State, std::size_t>> queue;
    queue.push_back({s, 0});
    visited.insert({s, 0});
    std::set<State> result;
    while (!queue.empty()) {
        auto [cur, pos] = queue.front();
        queue.pop_front();
        if (pos == letters.size()) {
            result.insert(cur);
        }
        for (const auto& step : a.out_steps(cur)) {
            std::size_t next_pos;
            if (step.label.is_tau()) {
                next_pos = pos;
            } else if (pos < letters.size() && step.label == letters[pos]) {
                next_pos = pos + 1;
            } else {
                continue;
            }
            if (visited.insert({step.dst, next_pos}).second) {
                queue.push_back({step.dst, next_pos});
            }
        }
    }
    return result;
}

std::set<State> reachable_states(const Automaton& a) {
    std::set<State> seen(a.start().begin(), a.start().end());
    std::deque<State> queue(a.start().begin(), a.start().end());
    while (!queue.empty()) {
        State cur = queue.front();
        queue.pop_front();
        for (const auto& step : a.out_steps(cur)) {
            if (seen.insert(step.dst).second) {
                queue.push_back(step.dst);
            }
        }
    }
    return seen;
}

std::set<State> after(const Automaton& a, const Trace& beta) {
    std::set<State> result;
    for (const auto& s : a.start()) {
        auto part = moves(a, s, beta);
        result.insert(part.begin(), part.end());
    }
    return result;
}

std::set<Trace> past(const Automaton& a, const State& s, std::size_t depth, bool bounded_ok) {
    if (!a.has_state(s)) {
        throw Error("past: unknown state " + s);
    }
    if (!is_acyclic(a) && depth > kPastDepthBudget && !bounded_ok) {
        throw BudgetError("past: depth " + std::to_string(depth) +
                          " exceeds budget on a cyclic automaton; pass bounded_ok to acknowledge");
    }
    std::set<Trace> result;
    for (const auto& exec : enumerate_executions(a, depth)) {
        if (exec.last() == s) {
            result.insert(trace_of(exec));
        }
    }
    return result;
}

bool is_deterministic(const Automaton& a) {
    if (a.start().size() != 1) {
        return false;
    }
    std::set<std::pair<State, ActionLabel>> seen;
    for (const auto& step : a.steps()) {
        if (step.label.is_tau() && step.src != step.dst) {
            return false;
        }
        if (!seen.insert({step.src, step.label}).second) {
            return false;  // two successors for the same (state, action)
        }
    }
    return true;
}

bool has_fin(const Automaton& a) {
    // Explicit automata are finite, so the start set is finite and every move
    // relation is image-finite.
    (void)a;
    return true;
}

bool is_forest(const Automaton& a) {
    auto reachable = reachable_states(a);
    if (reachable.size() != a.states().size()) {
        return false;
    }
    for (const auto& s : a.states()) {
        std::size_t in_degree = a.in_steps(s).size();
        if (a.is_start(s)) {
            if (in_degree != 0) {
                return false;
            }
        } else if (in_degree != 1) {
            return false;
        }
    }
    return true;
}

bool is_acyclic(const Automaton& a) {
    // Iterative DFS with colors over the step graph.
    std::map<State, int> color;  // 0 white, 1 gray, 2 black
    for (const auto& s : a.states()) {
        if (color[s] != 0) {
            continue;
        }
        std::vector<std::pair<State, std::size_t>> stack{{s, 0}};
        color[s] = 1;
        while (!stack.empty()) {
            auto& [cur, idx] = stack.back();
            const auto& outs = a.out_steps(cur);
            if (idx == outs.size()) {
                color[cur] = 2;
                stack.pop_back();
                continue;
            }
            const State& next = outs[idx].dst;
            ++idx;
            if (color[next] == 1) {
                return false;
            }
            if (color[next] == 0) {
                color[next] = 1;
                stack.push_back({next, 0});
            }
        }
    }
    return true;
}

std::set<Trace> finite_traces(const Automaton& a, std::size_t depth) {
    std::set<Trace> result;
    for (const auto& exec : enumerate_executions(a, depth)) {
        result.insert(trace_of(exec));
    }
    return result;
}

std::vector<ExecutionFragment> enumerate_executions(const Automaton& a, std::size_t depth) {
    std::vector<ExecutionFragment> result;
    ExecutionFragment cur;
    std::function<void()> recurse = [&]() {
        result.push_back(cur);
        if (cur.length() == depth) {
            return;
        }
        for (const auto& step : a.out_steps(cur.last())) {
            cur.tail.push_back({step.label, step.dst});
            recurse();
            cur.tail.pop_back();
        }
    };
    for (const auto& s : a.start()) {
        cur.head = s;
        cur.tail.clear();
        recurse();
    }
    return result;
}

std::set<State> tau_closure(const Automaton& a, const std::set<State>& states) {
    std::set<State> seen = states;
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
    return seen;
}

std::set<State> step_image(const Automaton& a, const std::set<State>& states,
                           const ActionLabel& letter) {
    std::set<State> image;
    for (const auto& s : states) {
        for (const auto& step : a.out_steps(s)) {
            if (step.label == letter) {
                image.insert(step.dst);
            }
        }
    }
    return image;
}

Automaton restrict_to(const Automaton& a, const std::set<State>& keep) {
    std::set<State> states;
    for (const auto& s : a.states()) {
        if (keep.count(s)) {
            states.insert(s);
        }
    }
    std::set<State> start;
    for (const auto& s : a.start()) {
        if (keep.count(s)) {
            start.insert(s);
        }
    }
    std::set<Step> steps;
    for (const auto& step : a.steps()) {
        if (keep.count(step.src) && keep.count(step.dst)) {
            steps.insert(step);
        }
    }
    return Automaton(std::move(states), std::move(start), a.actions(), std::move(steps));
}

}  // namespace normsim
