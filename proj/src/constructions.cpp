#include "normsim/constructions.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace normsim {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw CertificateError(message);
    }
}

std::string pair_state(const State& s, const State& u) { return "(" + s + "|" + u + ")"; }

}  // namespace

LiftResult lift_execution_refinement(const Automaton& a, const Automaton& b,
                                     const PartialStateMap& r, const ExecutionFragment& exec) {
    require(check_step_refinement(a, b, r).accepted, "lift requires an accepted step refinement");
    require(is_execution_fragment(a, exec), "lift requires a valid execution fragment");
    require(r.defined_at(exec.first()), "lift requires the first state in the refinement domain");

    LiftResult out;
    out.fragment.head = r.at(exec.first());
    out.relation.insert(0, 0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < exec.length(); ++i) {
        const State& mapped_src = r.at(exec.state(i));
        const ActionLabel& label = exec.action(i + 1);
        const State& mapped_dst = r.at(exec.state(i + 1));
        if (b.has_step(mapped_src, label, mapped_dst)) {
            out.fragment.tail.push_back({label, mapped_dst});
            ++j;
        }
        out.relation.insert(i + 1, j);
    }
    return out;
}

LiftResult lift_execution_forward(const Automaton& a, const Automaton& b, const Relation& f,
                                  const NormTable& norm, const ExecutionFragment& frag,
                                  const State& u) {
    require(check_normed_forward(a, b, f, norm).accepted,
            "lift requires an accepted normed forward simulation");
    require(is_execution_fragment(a, frag), "lift requires a valid execution fragment");
    require(f.contains(frag.first(), u), "lift requires u related to the first state");

    LiftResult out;
    out.fragment.head = u;
    out.relation.insert(0, 0);
    State cur = u;
    std::size_t j = 0;
    std::size_t i = 0;
    while (i < frag.length()) {
        const Step delta{frag.state(i), frag.action(i + 1), frag.state(i + 1)};
        const Step* match = nullptr;
        for (const auto& bstep : b.out_steps(cur)) {
            if (bstep.label == delta.label && f.contains(delta.dst, bstep.dst)) {
                match = &bstep;
                break;
            }
        }
        if (match != nullptr) {
            out.fragment.tail.push_back({match->label, match->dst});
            cur = match->dst;
            ++i;
            ++j;
        } else if (delta.label.is_tau() && f.contains(delta.dst, cur)) {
            ++i;
        } else {
            const std::uint64_t here = norm.get(delta, cur);
            const Step* descent = nullptr;
            std::uint64_t best = 0;
            for (const auto& bstep : b.out_steps(cur)) {
                if (!bstep.label.is_tau() || !f.contains(delta.src, bstep.dst)) {
                    continue;
                }
                std::uint64_t value = norm.get(delta, bstep.dst);
                if (value < here && (descent == nullptr || value < best)) {
                    descent = &bstep;
                    best = value;
                }
            }
            require(descent != nullptr, "forward lift stuck; certificate does not cover the step");
            out.fragment.tail.push_back({ActionLabel::tau(), descent->dst});
            cur = descent->dst;
            ++j;
        }
        out.relation.insert(i, j);
    }
    return out;
}

LiftResult lift_execution_backward(const Automaton& a, const Automaton& b, const Relation& rel,
                                   const NormTable& norm, const ExecutionFragment& frag,
                                   const State& u) {
    require(check_normed_backward(a, b, rel, norm).accepted,
            "lift requires an accepted normed backward simulation");
    require(is_execution_fragment(a, frag), "lift requires a valid execution fragment");
    require(rel.contains(frag.last(), u), "lift requires u related to the last state");

    // Built right to left: states_rev front is the fragment's end.
    std::vector<State> states_rev{u};
    std::vector<ActionLabel> labels_rev;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_rev{{frag.length(), 0}};
    State cur = u;
    std::size_t i = frag.length();
    while (i > 0) {
        const Step delta{frag.state(i - 1), frag.action(i), frag.state(i)};
        const Step* match = nullptr;
        for (const auto& bstep : b.in_steps(cur)) {
            if (bstep.label == delta.label && rel.contains(delta.src, bstep.src)) {
                match = &bstep;
                break;
            }
        }
        if (match != nullptr) {
            labels_rev.push_back(match->label);
            states_rev.push_back(match->src);
            cur = match->src;
            --i;
        } else if (delta.label.is_tau() && rel.contains(delta.src, cur)) {
            --i;
        } else {
            const std::uint64_t here = norm.get(delta, cur);
            const Step* descent = nullptr;
            std::uint64_t best = 0;
            for (const auto& bstep : b.in_steps(cur)) {
                if (!bstep.label.is_tau() || !rel.contains(delta.dst, bstep.src)) {
                    continue;
                }
                std::uint64_t value = norm.get(delta, bstep.src);
                if (value < here && (descent == nullptr || value < best)) {
                    descent = &bstep;
                    best = value;
                }
            }
            require(descent != nullptr, "backward lift stuck; certificate does not cover the step");
            labels_rev.push_back(ActionLabel::tau());
            states_rev.push_back(descent->src);
            cur = descent->src;
        }
        pairs_rev.push_back({i, states_rev.size() - 1});
    }
    if (a.is_start(frag.first())) {
        // Start condition descent so the lifted fragment is an execution.
        const NormKey start_key{frag.first()};
        while (!b.is_start(cur)) {
            const std::uint64_t here = norm.get(start_key, cur);
            const Step* descent = nullptr;
            std::uint64_t best = 0;
            for (const auto& bstep : b.in_steps(cur)) {
                if (!bstep.label.is_tau() || !rel.contains(frag.first(), bstep.src)) {
                    continue;
                }
                std::uint64_t value = norm.get(start_key, bstep.src);
                if (value < here && (descent == nullptr || value < best)) {
                    descent = &bstep;
                    best = value;
                }
            }
            require(descent != nullptr, "backward lift cannot reach a start state");
            labels_rev.push_back(ActionLabel::tau());
            states_rev.push_back(descent->src);
            cur = descent->src;
            pairs_rev.push_back({0, states_rev.size() - 1});
        }
    }

    LiftResult out;
    const std::size_t last_rev = states_rev.size() - 1;
    out.fragment.head = states_rev.back();
    for (std::size_t k = states_rev.size() - 1; k-- > 0;) {
        out.fragment.tail.push_back({labels_rev[k], states_rev[k]});
    }
    for (const auto& [ai, rev_j] : pairs_rev) {
        out.relation.insert(ai, last_rev - rev_j);
    }
    return out;
}

std::size_t default_unfold_depth(const Automaton& a) { return a.states().size() + 1; }

Unfolding unfold(const Automaton& a, std::size_t depth) {
    std::set<State> states;
    std::set<State> start;
    std::set<Step> steps;
    std::map<State, State> last_map;
    bool truncated = false;

    auto encode = [](const ExecutionFragment& exec) {
        std::string out = exec.head;
        for (const auto& [label, state] : exec.tail) {
            out += "·" + label.str() + "·" + state;
        }
        return out;
    };

    for (const auto& exec : enumerate_executions(a, depth)) {
        State name = encode(exec);
        states.insert(name);
        last_map.emplace(name, exec.last());
        if (exec.length() == 0) {
            start.insert(name);
        } else {
            steps.insert(Step{encode(exec.prefix(exec.length() - 1)),
                              exec.tail.back().first, name});
        }
        if (exec.length() == depth && !a.out_steps(exec.last()).empty()) {
            truncated = true;
        }
    }
    return Unfolding{Automaton(std::move(states), std::move(start), a.actions(), std::move(steps)),
                     PartialStateMap(std::move(last_map)), truncated};
}

Superposition superpose(const Automaton& a, const Relation& rel, const Automaton& b) {
    bool has_start_pair = false;
    for (const auto& [s, u] : rel.pairs()) {
        if (a.is_start(s) && b.is_start(u)) {
            has_start_pair = true;
            break;
        }
    }
    if (!has_start_pair) {
        throw Error("superposition requires a related pair of start states");
    }

    std::set<State> states;
    std::set<State> start;
    std::set<Step> steps;
    std::map<State, State> pi1;
    std::map<State, State> pi2;
    std::set<ActionLabel> actions;
    for (const auto& label : a.actions()) {
        if (b.actions().count(label)) {
            actions.insert(label);
        }
    }

    for (const auto& [s, u] : rel.pairs()) {
        State name = pair_state(s, u);
        states.insert(name);
        pi1.emplace(name, s);
        pi2.emplace(name, u);
        if (a.is_start(s) && b.is_start(u)) {
            start.insert(name);
        }
    }
    for (const auto& [s, u] : rel.pairs()) {
        State src = pair_state(s, u);
        for (const auto& bstep : b.out_steps(u)) {
            if (bstep.label.is_tau() && rel.contains(s, bstep.dst)) {
                steps.insert(Step{src, ActionLabel::tau(), pair_state(s, bstep.dst)});
            }
        }
        for (const auto& astep : a.out_steps(s)) {
            if (astep.label.is_tau() && rel.contains(astep.dst, u)) {
                steps.insert(Step{src, ActionLabel::tau(), pair_state(astep.dst, u)});
            }
        }
        for (const auto& astep : a.out_steps(s)) {
            if (!actions.count(astep.label)) {
                continue;
            }
            for (const auto& bstep : b.out_steps(u)) {
                if (bstep.label == astep.label && rel.contains(astep.dst, bstep.dst)) {
                    steps.insert(Step{src, astep.label, pair_state(astep.dst, bstep.dst)});
                }
            }
        }
    }
    return Superposition{Automaton(std::move(states), std::move(start), std::move(actions),
                                   std::move(steps)),
                         PartialStateMap(std::move(pi1)), PartialStateMap(std::move(pi2))};
}

Relation canonical_relation(const Automaton& a, const Automaton& b, bool bounded_ok) {
    if (!is_acyclic(a) && !bounded_ok) {
        throw BudgetError(
            "canonical relation on a cyclic lower automaton must be acknowledged with bounded_ok");
    }
    Relation result;
    using Node = std::pair<State, std::set<State>>;
    std::set<Node> visited;
    std::deque<Node> queue;
    std::set<State> initial = tau_closure(b, b.start());
    for (const auto& s0 : a.start()) {
        Node node{s0, initial};
        if (visited.insert(node).second) {
            queue.push_back(node);
        }
    }
    while (!queue.empty()) {
        auto [s, subset] = queue.front();
        queue.pop_front();
        for (const auto& u : subset) {
            result.insert(s, u);
        }
        for (const auto& step : a.out_steps(s)) {
            std::set<State> next = step.label.is_tau()
                                       ? subset
                                       : tau_closure(b, step_image(b, subset, step.label));
            if (next.empty()) {
                continue;
            }
            Node node{step.dst, std::move(next)};
            if (visited.insert(node).second) {
                queue.push_back(node);
            }
        }
    }
    return result;
}

Certificate compose_certificates(const Automaton& a, const Automaton& b, const Automaton& c,
                                 const Certificate& first, const Certificate& second) {
    if (kind_of(first) != kind_of(second)) {
        throw Error("certificate composition requires matching kinds");
    }
    require(check_certificate(a, b, first).accepted, "first certificate is not accepted");
    require(check_certificate(b, c, second).accepted, "second certificate is not accepted");
    switch (kind_of(first)) {
        case CertificateKind::refinement: {
            const auto& r1 = std::get<RefinementCert>(first).map;
            const auto& r2 = std::get<RefinementCert>(second).map;
            std::map<State, State> composed;
            for (const auto& [s, u] : r1.entries()) {
                if (auto v = r2.get(u)) {
                    composed.emplace(s, *v);
                }
            }
            return Certificate{RefinementCert{PartialStateMap(std::move(composed))}};
        }
        case CertificateKind::forward: {
            const auto& f = std::get<ForwardCert>(first).rel;
            const auto& g = std::get<ForwardCert>(second).rel;
            Relation composed;
            for (const auto& [s, u] : f.pairs()) {
                for (const auto& w : g.image(u)) {
                    composed.insert(s, w);
                }
            }
            return Certificate{ForwardCert{composed, norm_from_branching_forward(a, c, composed)}};
        }
        default:
            throw Error("certificate composition supports refinement and forward kinds");
    }
}

namespace {

struct StateSignature {
    bool start = false;
    std::vector<ActionLabel> out_labels;  // sorted
    std::vector<ActionLabel> in_labels;   // sorted

    auto operator<=>(const StateSignature&) const = default;
};

StateSignature signature_of(const Automaton& a, const State& s) {
    StateSignature sig;
    sig.start = a.is_start(s);
    for (const auto& step : a.out_steps(s)) {
        sig.out_labels.push_back(step.label);
    }
    for (const auto& step : a.in_steps(s)) {
        sig.in_labels.push_back(step.label);
    }
    std::sort(sig.out_labels.begin(), sig.out_labels.end());
    std::sort(sig.in_labels.begin(), sig.in_labels.end());
    return sig;
}

std::vector<State> bfs_order(const Automaton& a) {
    std::vector<State> order;
    std::set<State> seen(a.start().begin(), a.start().end());
    std::deque<State> queue(a.start().begin(), a.start().end());
    while (!queue.empty()) {
        State cur = queue.front();
        queue.pop_front();
        order.push_back(cur);
        for (const auto& step : a.out_steps(cur)) {
            if (seen.insert(step.dst).second) {
                queue.push_back(step.dst);
            }
        }
    }
    return order;
}

}  // namespace

std::optional<PartialStateMap> check_isomorphism(const Automaton& a, const Automaton& b) {
    Automaton ra = restrict_to(a, reachable_states(a));
    Automaton rb = restrict_to(b, reachable_states(b));
    if (ra.states().size() != rb.states().size() || ra.start().size() != rb.start().size() ||
        ra.steps().size() != rb.steps().size()) {
        return std::nullopt;
    }
    std::map<State, StateSignature> sig_a;
    std::map<State, StateSignature> sig_b;
    std::map<StateSignature, std::size_t> counts;
    for (const auto& s : ra.states()) {
        sig_a.emplace(s, signature_of(ra, s));
        ++counts[sig_a.at(s)];
    }
    for (const auto& u : rb.states()) {
        sig_b.emplace(u, signature_of(rb, u));
        --counts[sig_b.at(u)];
    }
    for (const auto& [sig, count] : counts) {
        if (count != 0) {
            return std::nullopt;
        }
    }

    std::vector<State> order = bfs_order(ra);
    std::map<State, State> forward;
    std::map<State, State> backward;

    std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
        if (idx == order.size()) {
            return true;
        }
        const State& s = order[idx];
        for (const auto& u : rb.states()) {
            if (backward.count(u) || sig_a.at(s) != sig_b.at(u)) {
                continue;
            }
            bool consistent = true;
            for (const auto& step : ra.out_steps(s)) {
                auto it = forward.find(step.dst);
                if (it != forward.end() && !rb.has_step(u, step.label, it->second)) {
                    consistent = false;
                    break;
                }
            }
            if (consistent) {
                for (const auto& step : ra.in_steps(s)) {
                    auto it = forward.find(step.src);
                    if (it != forward.end() && !rb.has_step(it->second, step.label, u)) {
                        consistent = false;
                        break;
                    }
                }
            }
            if (consistent) {
                // Pull back the image's steps into already-assigned states.
                for (const auto& bstep : rb.out_steps(u)) {
                    auto it = backward.find(bstep.dst);
                    if (it != backward.end() && !ra.has_step(s, bstep.label, it->second)) {
                        consistent = false;
                        break;
                    }
                }
            }
            if (consistent) {
                for (const auto& bstep : rb.in_steps(u)) {
                    auto it = backward.find(bstep.src);
                    if (it != backward.end() && !ra.has_step(it->second, bstep.label, s)) {
                        consistent = false;
                        break;
                    }
                }
            }
            if (!consistent) {
                continue;
            }
            forward.emplace(s, u);
            backward.emplace(u, s);
            if (assign(idx + 1)) {
                return true;
            }
            forward.erase(s);
            backward.erase(u);
        }
        return false;
    };

    if (!assign(0)) {
        return std::nullopt;
    }
    return PartialStateMap(forward);
}

NormTable lift_norm_through(const NormTable& norm, const PartialStateMap& projection) {
    NormTable lifted;
    for (const auto& [state, image] : projection.entries()) {
        for (const auto& [key, value] : norm.entries()) {
            if (key.second == image) {
                lifted.set(key.first, state, value);
            }
        }
    }
    return lifted;
}

}  // namespace normsim
