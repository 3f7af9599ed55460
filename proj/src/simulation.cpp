#include "normsim/simulation.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace normsim {

namespace {

constexpr std::uint64_t kNoDistance = ~std::uint64_t{0};

void validate_relation(const Automaton& a, const Automaton& b, const Relation& rel) {
    for (const auto& [s, u] : rel.pairs()) {
        if (!a.has_state(s)) {
            throw CertificateError("relation references unknown state of the lower automaton: " + s);
        }
        if (!b.has_state(u)) {
            throw CertificateError("relation references unknown state of the upper automaton: " + u);
        }
    }
}

void validate_map(const Automaton& a, const Automaton& b, const PartialStateMap& r) {
    for (const auto& [s, u] : r.entries()) {
        if (!a.has_state(s)) {
            throw CertificateError("map references unknown state of the source automaton: " + s);
        }
        if (!b.has_state(u)) {
            throw CertificateError("map references unknown state of the target automaton: " + u);
        }
    }
}

void validate_norm(const Automaton& a, const Automaton& b, const NormTable& norm) {
    for (const auto& [key, value] : norm.entries()) {
        const auto& [norm_key, u] = key;
        if (const Step* step = std::get_if<Step>(&norm_key)) {
            if (!a.steps().count(*step)) {
                throw CertificateError("norm references unknown step: " + step->src + " " +
                                       step->label.str() + " " + step->dst);
            }
        } else {
            const State& s = std::get<State>(norm_key);
            if (!a.is_start(s)) {
                throw CertificateError("norm references unknown start state: " + s);
            }
        }
        if (!b.has_state(u)) {
            throw CertificateError("norm references unknown state of the upper automaton: " + u);
        }
    }
}

// Distances of the shortest execution fragments from u that are f-related to
// delta = (s, a, t): 0 for a stutter, 1 for a direct match, 1 + d(v) after an
// internal step to v related to s. States without a related fragment are
// absent.
std::map<State, std::uint64_t> forward_step_distances(const Automaton& b, const Relation& f,
                                                      const Step& delta) {
    std::set<State> in_s;
    std::set<State> in_t;
    for (const auto& [x, u] : f.pairs()) {
        if (x == delta.src) {
            in_s.insert(u);
        }
        if (x == delta.dst) {
            in_t.insert(u);
        }
    }
    std::map<State, std::uint64_t> dist;
    using Entry = std::pair<std::uint64_t, State>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    auto offer = [&](const State& u, std::uint64_t d) {
        auto it = dist.find(u);
        if (it == dist.end() || it->second > d) {
            dist[u] = d;
            queue.push({d, u});
        }
    };
    for (const auto& u : in_s) {
        if (delta.label.is_tau() && in_t.count(u)) {
            offer(u, 0);
        }
        for (const auto& step : b.out_steps(u)) {
            if (step.label == delta.label && in_t.count(step.dst)) {
                offer(u, 1);
                break;
            }
        }
    }
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (dist[v] != d) {
            continue;
        }
        for (const auto& step : b.in_steps(v)) {
            if (step.label.is_tau() && in_s.count(step.src)) {
                offer(step.src, d + 1);
            }
        }
    }
    return dist;
}

// Mirror image: shortest fragments that end in u and are rel-related to
// delta = (t, a, s); internal steps are prepended.
std::map<State, std::uint64_t> backward_step_distances(const Automaton& b, const Relation& rel,
                                                       const Step& delta) {
    std::set<State> in_t;
    std::set<State> in_s;
    for (const auto& [x, u] : rel.pairs()) {
        if (x == delta.src) {
            in_t.insert(u);
        }
        if (x == delta.dst) {
            in_s.insert(u);
        }
    }
    std::map<State, std::uint64_t> dist;
    using Entry = std::pair<std::uint64_t, State>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    auto offer = [&](const State& u, std::uint64_t d) {
        auto it = dist.find(u);
        if (it == dist.end() || it->second > d) {
            dist[u] = d;
            queue.push({d, u});
        }
    };
    for (const auto& u : in_s) {
        if (delta.label.is_tau() && in_t.count(u)) {
            offer(u, 0);
        }
        for (const auto& step : b.in_steps(u)) {
            if (step.label == delta.label && in_t.count(step.src)) {
                offer(u, 1);
                break;
            }
        }
    }
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (dist[v] != d) {
            continue;
        }
        for (const auto& step : b.out_steps(v)) {
            if (step.label.is_tau() && in_s.count(step.dst)) {
                offer(step.dst, d + 1);
            }
        }
    }
    return dist;
}

// Shortest all-internal executions of b ending in u with every state related
// to the start state s0.
std::map<State, std::uint64_t> backward_start_distances(const Automaton& b, const Relation& rel,
                                                        const State& s0) {
    std::set<State> in_s0;
    for (const auto& [x, u] : rel.pairs()) {
        if (x == s0) {
            in_s0.insert(u);
        }
    }
    std::map<State, std::uint64_t> dist;
    using Entry = std::pair<std::uint64_t, State>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    auto offer = [&](const State& u, std::uint64_t d) {
        auto it = dist.find(u);
        if (it == dist.end() || it->second > d) {
            dist[u] = d;
            queue.push({d, u});
        }
    };
    for (const auto& u : in_s0) {
        if (b.is_start(u)) {
            offer(u, 0);
        }
    }
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (dist[v] != d) {
            continue;
        }
        for (const auto& step : b.out_steps(v)) {
            if (step.label.is_tau() && in_s0.count(step.dst)) {
                offer(step.dst, d + 1);
            }
        }
    }
    return dist;
}

}  // namespace

std::uint64_t NormTable::get(const NormKey& key, const State& u) const {
    auto it = entries_.find({key, u});
    return it == entries_.end() ? 0 : it->second;
}

void NormTable::set(const NormKey& key, const State& u, std::uint64_t value) {
    if (value == 0) {
        entries_.erase({key, u});
    } else {
        entries_[{key, u}] = value;
    }
}

CertificateKind kind_of(const Certificate& cert) {
    switch (cert.index()) {
        case 0: return CertificateKind::refinement;
        case 1: return CertificateKind::forward;
        case 2: return CertificateKind::backward;
        case 3: return CertificateKind::history;
        default: return CertificateKind::prophecy;
    }
}

std::string to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::refinement: return "refinement";
        case CertificateKind::forward: return "forward";
        case CertificateKind::backward: return "backward";
        case CertificateKind::history: return "history";
        case CertificateKind::prophecy: return "prophecy";
    }
    return "unknown";
}

CertificateKind certificate_kind_from_string(const std::string& text) {
    if (text == "refinement") return CertificateKind::refinement;
    if (text == "forward") return CertificateKind::forward;
    if (text == "backward") return CertificateKind::backward;
    if (text == "history") return CertificateKind::history;
    if (text == "prophecy") return CertificateKind::prophecy;
    throw Error("unknown certificate kind: " + text);
}

void CheckReport::add(Violation v, std::size_t cap) {
    accepted = false;
    if (violations.size() < cap) {
        violations.push_back(std::move(v));
    } else {
        truncated = true;
    }
}

CheckReport check_step_refinement(const Automaton& a, const Automaton& b, const PartialStateMap& r,
                                  CheckMode mode, std::size_t max_violations) {
    validate_map(a, b, r);
    CheckReport report;
    for (const auto& s : a.start()) {
        auto image = r.get(s);
        if (!image || !b.is_start(*image)) {
            report.add({"refinement-1", std::nullopt, s, image,
                        image ? "start state mapped outside start(B)" : "start state not in domain"},
                       max_violations);
        }
    }
    std::set<State> reach_a;
    std::set<State> reach_b;
    if (mode == CheckMode::adapted) {
        reach_a = reachable_states(a);
        reach_b = reachable_states(b);
    }
    for (const auto& step : a.steps()) {
        auto rs = r.get(step.src);
        if (!rs) {
            continue;
        }
        if (mode == CheckMode::adapted && (!reach_a.count(step.src) || !reach_b.count(*rs))) {
            continue;
        }
        auto rt = r.get(step.dst);
        if (!rt) {
            report.add({"refinement-2", step, std::nullopt, *rs, "step target not in domain"},
                       max_violations);
            continue;
        }
        bool stutter = step.label.is_tau() && *rs == *rt;
        bool matched = b.has_step(*rs, step.label, *rt);
        if (stutter || matched) {
            continue;
        }
        bool has_labeled_successor = false;
        for (const auto& bstep : b.out_steps(*rs)) {
            if (bstep.label == step.label) {
                has_labeled_successor = true;
                break;
            }
        }
        std::string id = has_labeled_successor ? "refinement-2b"
                         : step.label.is_tau() ? "refinement-2a"
                                               : "refinement-2";
        report.add({id, step, std::nullopt, *rs, "no matching step and no tau stutter"},
                   max_violations);
    }
    return report;
}

CheckReport check_normed_forward(const Automaton& a, const Automaton& b, const Relation& f,
                                 const NormTable& norm, CheckMode mode,
                                 std::size_t max_violations) {
    validate_relation(a, b, f);
    validate_norm(a, b, norm);
    CheckReport report;
    for (const auto& s : a.start()) {
        bool ok = false;
        for (const auto& u : f.image(s)) {
            if (b.is_start(u)) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            report.add({"forward-1", std::nullopt, s, std::nullopt,
                        "no related start state of the upper automaton"},
                       max_violations);
        }
    }
    std::set<State> reach_a;
    std::set<State> reach_b;
    if (mode == CheckMode::adapted) {
        reach_a = reachable_states(a);
        reach_b = reachable_states(b);
    }
    for (const auto& step : a.steps()) {
        if (mode == CheckMode::adapted && !reach_a.count(step.src)) {
            continue;
        }
        for (const auto& u : f.image(step.src)) {
            if (mode == CheckMode::adapted && !reach_b.count(u)) {
                continue;
            }
            if (step.label.is_tau() && f.contains(step.dst, u)) {
                continue;  // 2a
            }
            bool matched = false;
            bool has_labeled_successor = false;
            for (const auto& bstep : b.out_steps(u)) {
                if (bstep.label != step.label) {
                    continue;
                }
                has_labeled_successor = true;
                if (f.contains(step.dst, bstep.dst)) {
                    matched = true;
                    break;
                }
            }
            if (matched) {
                continue;  // 2b
            }
            bool descended = false;
            bool has_tau_candidate = false;
            std::uint64_t here = norm.get(step, u);
            for (const auto& bstep : b.out_steps(u)) {
                if (!bstep.label.is_tau() || !f.contains(step.src, bstep.dst)) {
                    continue;
                }
                has_tau_candidate = true;
                if (norm.get(step, bstep.dst) < here) {
                    descended = true;
                    break;
                }
            }
            if (descended) {
                continue;  // 2c
            }
            std::string id = has_labeled_successor ? "forward-2b"
                             : has_tau_candidate   ? "forward-2c"
                             : step.label.is_tau() ? "forward-2a"
                                                   : "forward-2";
            report.add({id, step, std::nullopt, u, "no clause of the step condition applies"},
                       max_violations);
        }
    }
    return report;
}

CheckReport check_normed_backward(const Automaton& a, const Automaton& b, const Relation& rel,
                                  const NormTable& norm, const std::optional<std::set<State>>& q,
                                  CheckMode mode, std::size_t max_violations) {
    validate_relation(a, b, rel);
    validate_norm(a, b, norm);
    if (q) {
        for (const auto& u : *q) {
            if (!b.has_state(u)) {
                throw CertificateError("Q references unknown state of the upper automaton: " + u);
            }
        }
    }
    const bool adapted = mode == CheckMode::adapted;
    auto in_q = [&](const State& u) { return !adapted || !q || q->count(u) != 0; };

    CheckReport report;
    std::set<State> reach_a;
    if (adapted) {
        reach_a = reachable_states(a);
    }
    // Totality: plain requires every state related; adapted requires every
    // reachable state related to some Q-state.
    if (!adapted) {
        for (const auto& s : a.states()) {
            if (rel.image(s).empty()) {
                report.add({"backward-total", std::nullopt, s, std::nullopt,
                            "state has no related upper state"},
                           max_violations);
            }
        }
    } else {
        for (const auto& s : reach_a) {
            bool ok = false;
            for (const auto& u : rel.image(s)) {
                if (in_q(u)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                report.add({"backward-3", std::nullopt, s, std::nullopt,
                            "reachable state has no related Q-state"},
                           max_violations);
            }
        }
    }
    for (const auto& s : a.start()) {
        for (const auto& u : rel.image(s)) {
            if (!in_q(u)) {
                continue;
            }
            if (b.is_start(u)) {
                continue;  // 1a
            }
            bool descended = false;
            bool has_tau_candidate = false;
            std::uint64_t here = norm.get(NormKey{s}, u);
            for (const auto& bstep : b.in_steps(u)) {
                if (!bstep.label.is_tau() || !rel.contains(s, bstep.src) || !in_q(bstep.src)) {
                    continue;
                }
                has_tau_candidate = true;
                if (norm.get(NormKey{s}, bstep.src) < here) {
                    descended = true;
                    break;
                }
            }
            if (descended) {
                continue;  // 1b
            }
            report.add({has_tau_candidate ? "backward-1b" : "backward-1", std::nullopt, s, u,
                        "related state is not a start state and no descending tau step reaches it"},
                       max_violations);
        }
    }
    for (const auto& step : a.steps()) {
        if (adapted && !reach_a.count(step.src)) {
            continue;
        }
        for (const auto& u : rel.image(step.dst)) {
            if (!in_q(u)) {
                continue;
            }
            if (step.label.is_tau() && rel.contains(step.src, u)) {
                continue;  // 2a
            }
            bool matched = false;
            bool has_labeled_predecessor = false;
            for (const auto& bstep : b.in_steps(u)) {
                if (bstep.label != step.label) {
                    continue;
                }
                has_labeled_predecessor = true;
                if (rel.contains(step.src, bstep.src) && in_q(bstep.src)) {
                    matched = true;
                    break;
                }
            }
            if (matched) {
                continue;  // 2b
            }
            bool descended = false;
            bool has_tau_candidate = false;
            std::uint64_t here = norm.get(step, u);
            for (const auto& bstep : b.in_steps(u)) {
                if (!bstep.label.is_tau() || !rel.contains(step.dst, bstep.src) ||
                    !in_q(bstep.src)) {
                    continue;
                }
                has_tau_candidate = true;
                if (norm.get(step, bstep.src) < here) {
                    descended = true;
                    break;
                }
            }
            if (descended) {
                continue;  // 2c
            }
            std::string id = has_labeled_predecessor ? "backward-2b"
                             : has_tau_candidate     ? "backward-2c"
                             : step.label.is_tau()   ? "backward-2a"
                                                     : "backward-2";
            report.add({id, step, std::nullopt, u, "no clause of the backward step condition applies"},
                       max_violations);
        }
    }
    return report;
}

ImageFiniteReport check_image_finite(const Relation& rel) {
    ImageFiniteReport report;
    std::map<State, std::size_t> sizes;
    for (const auto& [s, u] : rel.pairs()) {
        ++sizes[s];
    }
    for (const auto& [s, n] : sizes) {
        report.max_image = std::max(report.max_image, n);
    }
    return report;
}

CheckReport check_branching_forward(const Automaton& a, const Automaton& b, const Relation& f,
                                    std::size_t max_violations) {
    validate_relation(a, b, f);
    CheckReport report;
    for (const auto& s : a.start()) {
        bool ok = false;
        for (const auto& u : f.image(s)) {
            if (b.is_start(u)) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            report.add({"branching-forward-1", std::nullopt, s, std::nullopt,
                        "no related start state of the upper automaton"},
                       max_violations);
        }
    }
    for (const auto& step : a.steps()) {
        auto dist = forward_step_distances(b, f, step);
        for (const auto& u : f.image(step.src)) {
            if (!dist.count(u)) {
                report.add({"branching-forward-2", step, std::nullopt, u,
                            "no related fragment simulates the step"},
                           max_violations);
            }
        }
    }
    return report;
}

CheckReport check_branching_backward(const Automaton& a, const Automaton& b, const Relation& rel,
                                     std::size_t max_violations) {
    validate_relation(a, b, rel);
    CheckReport report;
    for (const auto& s : a.states()) {
        if (rel.image(s).empty()) {
            report.add({"branching-backward-total", std::nullopt, s, std::nullopt,
                        "state has no related upper state"},
                       max_violations);
        }
    }
    for (const auto& s : a.start()) {
        auto dist = backward_start_distances(b, rel, s);
        for (const auto& u : rel.image(s)) {
            if (!dist.count(u)) {
                report.add({"branching-backward-1", std::nullopt, s, u,
                            "no related all-internal execution ends in the state"},
                           max_violations);
            }
        }
    }
    for (const auto& step : a.steps()) {
        auto dist = backward_step_distances(b, rel, step);
        for (const auto& u : rel.image(step.dst)) {
            if (!dist.count(u)) {
                report.add({"branching-backward-2", step, std::nullopt, u,
                            "no related fragment ending in the state simulates the step"},
                           max_violations);
            }
        }
    }
    return report;
}

NormTable branching_forward_distances(const Automaton& a, const Automaton& b, const Relation& f) {
    NormTable table;
    for (const auto& step : a.steps()) {
        for (const auto& [u, d] : forward_step_distances(b, f, step)) {
            table.set(NormKey{step}, u, d);
        }
    }
    return table;
}

NormTable branching_backward_distances(const Automaton& a, const Automaton& b,
                                       const Relation& rel) {
    NormTable table;
    for (const auto& step : a.steps()) {
        for (const auto& [u, d] : backward_step_distances(b, rel, step)) {
            table.set(NormKey{step}, u, d);
        }
    }
    for (const auto& s : a.start()) {
        for (const auto& [u, d] : backward_start_distances(b, rel, s)) {
            table.set(NormKey{s}, u, d);
        }
    }
    return table;
}

NormTable norm_from_branching_forward(const Automaton& a, const Automaton& b, const Relation& f) {
    if (!check_branching_forward(a, b, f).accepted) {
        throw CertificateError(
            "norm synthesis requires an accepted branching forward simulation");
    }
    return branching_forward_distances(a, b, f);
}

NormTable norm_from_branching_backward(const Automaton& a, const Automaton& b,
                                       const Relation& rel) {
    if (!check_branching_backward(a, b, rel).accepted) {
        throw CertificateError(
            "norm synthesis requires an accepted branching backward simulation");
    }
    return branching_backward_distances(a, b, rel);
}

CheckReport check_history(const Automaton& a, const Automaton& b, const PartialStateMap& r,
                          const NormTable& norm, CheckMode mode, std::size_t max_violations) {
    validate_map(b, a, r);
    CheckReport report = check_step_refinement(b, a, r, mode, max_violations);
    for (auto& v : report.violations) {
        v.detail = "step refinement component (upper to lower): " + v.detail;
    }
    CheckReport forward = check_normed_forward(a, b, r.inverse(), norm, mode, max_violations);
    for (auto& v : forward.violations) {
        v.detail = "forward simulation component: " + v.detail;
        report.add(std::move(v), max_violations);
    }
    report.accepted = report.accepted && forward.accepted;
    report.truncated = report.truncated || forward.truncated;
    return report;
}

CheckReport check_prophecy(const Automaton& a, const Automaton& b, const PartialStateMap& r,
                           const NormTable& norm, bool image_finite_required, CheckMode mode,
                           std::size_t max_violations) {
    validate_map(b, a, r);
    CheckReport report = check_step_refinement(b, a, r, mode, max_violations);
    for (auto& v : report.violations) {
        v.detail = "step refinement component (upper to lower): " + v.detail;
    }
    CheckReport backward =
        check_normed_backward(a, b, r.inverse(), norm, std::nullopt, mode, max_violations);
    for (auto& v : backward.violations) {
        v.detail = "backward simulation component: " + v.detail;
        report.add(std::move(v), max_violations);
    }
    report.accepted = report.accepted && backward.accepted;
    report.truncated = report.truncated || backward.truncated;
    if (image_finite_required) {
        report.max_image = check_image_finite(r.inverse()).max_image;
    }
    return report;
}

CheckReport check_certificate(const Automaton& a, const Automaton& b, const Certificate& cert,
                              CheckMode mode, std::size_t max_violations) {
    if (const auto* c = std::get_if<RefinementCert>(&cert)) {
        return check_step_refinement(a, b, c->map, mode, max_violations);
    }
    if (const auto* c = std::get_if<ForwardCert>(&cert)) {
        return check_normed_forward(a, b, c->rel, c->norm, mode, max_violations);
    }
    if (const auto* c = std::get_if<BackwardCert>(&cert)) {
        return check_normed_backward(a, b, c->rel, c->norm, c->q, mode, max_violations);
    }
    if (const auto* c = std::get_if<HistoryCert>(&cert)) {
        return check_history(a, b, c->map, c->norm, mode, max_violations);
    }
    const auto& c = std::get<ProphecyCert>(cert);
    return check_prophecy(a, b, c.map, c.norm, c.image_finite_required, mode, max_violations);
}

Relation greatest_branching_forward(const Automaton& a, const Automaton& b) {
    Relation f;
    for (const auto& s : a.states()) {
        for (const auto& u : b.states()) {
            f.insert(s, u);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& step : a.steps()) {
            auto dist = forward_step_distances(b, f, step);
            for (const auto& u : f.image(step.src)) {
                if (!dist.count(u)) {
                    f.erase(step.src, u);
                    changed = true;
                }
            }
        }
    }
    return f;
}

Relation greatest_branching_backward(const Automaton& a, const Automaton& b) {
    Relation rel;
    for (const auto& s : a.states()) {
        for (const auto& u : b.states()) {
            rel.insert(s, u);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& step : a.steps()) {
            auto dist = backward_step_distances(b, rel, step);
            for (const auto& u : rel.image(step.dst)) {
                if (!dist.count(u)) {
                    rel.erase(step.dst, u);
                    changed = true;
                }
            }
        }
        for (const auto& s : a.start()) {
            auto dist = backward_start_distances(b, rel, s);
            for (const auto& u : rel.image(s)) {
                if (!dist.count(u)) {
                    rel.erase(s, u);
                    changed = true;
                }
            }
        }
    }
    return rel;
}

namespace {

std::optional<PartialStateMap> search_refinement(const Automaton& a, const Automaton& b) {
    std::map<State, State> assign;

    std::function<bool()> solve = [&]() -> bool {
        for (const auto& s0 : a.start()) {
            if (assign.count(s0)) {
                continue;
            }
            for (const auto& v : b.start()) {
                assign[s0] = v;
                if (solve()) {
                    return true;
                }
                assign.erase(s0);
            }
            return false;
        }
        for (const auto& step : a.steps()) {
            auto src_it = assign.find(step.src);
            if (src_it == assign.end()) {
                continue;
            }
            const State& rs = src_it->second;
            auto dst_it = assign.find(step.dst);
            if (dst_it != assign.end()) {
                bool ok = (step.label.is_tau() && rs == dst_it->second) ||
                          b.has_step(rs, step.label, dst_it->second);
                if (!ok) {
                    return false;
                }
                continue;
            }
            std::set<State> candidates;
            if (step.label.is_tau()) {
                candidates.insert(rs);
            }
            for (const auto& bstep : b.out_steps(rs)) {
                if (bstep.label == step.label) {
                    candidates.insert(bstep.dst);
                }
            }
            for (const auto& v : candidates) {
                assign[step.dst] = v;
                if (solve()) {
                    return true;
                }
                assign.erase(step.dst);
            }
            return false;
        }
        return true;
    };

    if (!solve()) {
        return std::nullopt;
    }
    return PartialStateMap(assign);
}

}  // namespace

std::optional<Certificate> find_certificate(const Automaton& a, const Automaton& b,
                                            CertificateKind kind, std::size_t budget) {
    if (a.states().size() * b.states().size() > budget) {
        throw BudgetError("certificate search budget exceeded: " +
                          std::to_string(a.states().size() * b.states().size()) + " state pairs > " +
                          std::to_string(budget));
    }
    switch (kind) {
        case CertificateKind::refinement: {
            auto map = search_refinement(a, b);
            if (!map) {
                return std::nullopt;
            }
            return Certificate{RefinementCert{*map}};
        }
        case CertificateKind::forward: {
            Relation f = greatest_branching_forward(a, b);
            if (!check_branching_forward(a, b, f).accepted) {
                return std::nullopt;
            }
            return Certificate{ForwardCert{f, branching_forward_distances(a, b, f)}};
        }
        case CertificateKind::backward: {
            Relation rel = greatest_branching_backward(a, b);
            if (!check_branching_backward(a, b, rel).accepted) {
                return std::nullopt;
            }
            return Certificate{BackwardCert{rel, branching_backward_distances(a, b, rel),
                                            std::nullopt}};
        }
        default:
            throw Error("find_certificate supports refinement, forward and backward kinds");
    }
}

}  // namespace normsim
