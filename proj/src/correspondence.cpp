#include "normsim/correspondence.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace normsim {

namespace {

constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

CorrespondenceVerdict check_conditions(const ExecutionFragment& frag,
                                       const ExecutionFragment& frag_b, const Relation* rel,
                                       const IndexRelation& idx, bool require_monotone = true) {
    const std::size_t n = frag.length();
    const std::size_t m = frag_b.length();

    for (const auto& [i, j] : idx.pairs()) {
        if (i > n || j > m) {
            return CorrespondenceVerdict::fail(IndexCondition::states_related, {i, j});
        }
        if (rel != nullptr && !rel->contains(frag.state(i), frag_b.state(j))) {
            return CorrespondenceVerdict::fail(IndexCondition::states_related, {i, j});
        }
    }
    // Monotonicity: with pairs iterated in sorted order it is enough to check
    // that the minimum j per i block never drops below the previous block's
    // minimum, and more generally any i < i' with j > j'. Sorted iteration
    // makes the first offender deterministic.
    if (require_monotone) {
        for (const auto& p : idx.pairs()) {
            for (const auto& q : idx.pairs()) {
                if (p.first < q.first && p.second > q.second) {
                    return CorrespondenceVerdict::fail(IndexCondition::monotone, q);
                }
            }
        }
    }
    std::vector<bool> covered_left(n + 1, false);
    std::vector<bool> covered_right(m + 1, false);
    for (const auto& [i, j] : idx.pairs()) {
        covered_left[i] = true;
        covered_right[j] = true;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        if (!covered_left[i]) {
            return CorrespondenceVerdict::fail(IndexCondition::total_left, {i, 0});
        }
    }
    for (std::size_t j = 0; j <= m; ++j) {
        if (!covered_right[j]) {
            return CorrespondenceVerdict::fail(IndexCondition::total_right, {0, j});
        }
    }
    for (const auto& [i, j] : idx.pairs()) {
        if (i + 1 <= n && j + 1 <= m && idx.contains(i + 1, j + 1) &&
            frag.action(i + 1) != frag_b.action(j + 1)) {
            return CorrespondenceVerdict::fail(IndexCondition::square_label, {i, j});
        }
        if (i + 1 <= n && idx.contains(i + 1, j) && !frag.action(i + 1).is_tau()) {
            return CorrespondenceVerdict::fail(IndexCondition::left_triangle_tau, {i, j});
        }
        if (j + 1 <= m && idx.contains(i, j + 1) && !frag_b.action(j + 1).is_tau()) {
            return CorrespondenceVerdict::fail(IndexCondition::right_triangle_tau, {i, j});
        }
    }
    return CorrespondenceVerdict::ok();
}

}  // namespace

std::string to_string(IndexCondition c) {
    switch (c) {
        case IndexCondition::states_related: return "states-related";
        case IndexCondition::monotone: return "monotone";
        case IndexCondition::total_left: return "total-left";
        case IndexCondition::total_right: return "total-right";
        case IndexCondition::square_label: return "square-label";
        case IndexCondition::left_triangle_tau: return "left-triangle-tau";
        case IndexCondition::right_triangle_tau: return "right-triangle-tau";
    }
    return "unknown";
}

CorrespondenceVerdict check_index_relation(const ExecutionFragment& frag,
                                           const ExecutionFragment& frag_b, const Relation& rel,
                                           const IndexRelation& idx) {
    return check_conditions(frag, frag_b, &rel, idx);
}

CorrespondenceVerdict check_index_relation_structure(const ExecutionFragment& frag,
                                                     const ExecutionFragment& frag_b,
                                                     const IndexRelation& idx) {
    return check_conditions(frag, frag_b, nullptr, idx);
}

std::optional<IndexRelation> find_correspondence(const ExecutionFragment& frag,
                                                 const ExecutionFragment& frag_b,
                                                 const Relation& rel) {
    const std::size_t n = frag.length();
    const std::size_t m = frag_b.length();

    auto related = [&](std::size_t i, std::size_t j) {
        return rel.contains(frag.state(i), frag_b.state(j));
    };
    if (!related(0, 0)) {
        return std::nullopt;
    }

    // remaining[i][j]: minimum number of additional pairs needed to extend a
    // path from (i, j) to (n, m), or infinity.
    std::vector<std::vector<std::size_t>> remaining(n + 1,
                                                    std::vector<std::size_t>(m + 1, kInfinity));
    for (std::size_t ii = n + 1; ii-- > 0;) {
        for (std::size_t jj = m + 1; jj-- > 0;) {
            if (!related(ii, jj)) {
                continue;
            }
            if (ii == n && jj == m) {
                remaining[ii][jj] = 0;
                continue;
            }
            std::size_t best = kInfinity;
            if (ii < n && jj < m && frag.action(ii + 1) == frag_b.action(jj + 1) &&
                remaining[ii + 1][jj + 1] != kInfinity) {
                best = std::min(best, remaining[ii + 1][jj + 1] + 1);
            }
            if (ii < n && frag.action(ii + 1).is_tau() && remaining[ii + 1][jj] != kInfinity) {
                best = std::min(best, remaining[ii + 1][jj] + 1);
            }
            if (jj < m && frag_b.action(jj + 1).is_tau() && remaining[ii][jj + 1] != kInfinity) {
                best = std::min(best, remaining[ii][jj + 1] + 1);
            }
            remaining[ii][jj] = best;
        }
    }
    if (remaining[0][0] == kInfinity) {
        return std::nullopt;
    }

    // Greedy reconstruction. Among the shortest witnesses, preferring at each
    // point the lexicographically least next pair yields the least sorted
    // pair list overall.
    IndexRelation result;
    std::size_t i = 0;
    std::size_t j = 0;
    result.insert(0, 0);
    while (i != n || j != m) {
        std::size_t budget = remaining[i][j] - 1;
        if (j < m && frag_b.action(j + 1).is_tau() && related(i, j + 1) &&
            remaining[i][j + 1] == budget) {
            j = j + 1;
        } else if (i < n && frag.action(i + 1).is_tau() && related(i + 1, j) &&
                   remaining[i + 1][j] == budget) {
            i = i + 1;
        } else if (i < n && j < m && frag.action(i + 1) == frag_b.action(j + 1) &&
                   related(i + 1, j + 1) && remaining[i + 1][j + 1] == budget) {
            i = i + 1;
            j = j + 1;
        } else {
            return std::nullopt;  // unreachable with a consistent table
        }
        result.insert(i, j);
    }
    return result;
}

bool is_reduced(const ExecutionFragment& frag, const ExecutionFragment& frag_b,
                const IndexRelation& idx) {
    const std::size_t n = frag.length();
    (void)frag_b;
    for (const auto& [i, j] : idx.pairs()) {
        if (i + 1 <= n && idx.contains(i + 1, j + 1) &&
            (idx.contains(i + 1, j) || idx.contains(i, j + 1))) {
            return false;  // not N-free
        }
    }
    std::size_t final_count = 0;
    for (const auto& [i, j] : idx.pairs()) {
        if (i == n) {
            ++final_count;
        }
    }
    return final_count == 1;
}

ReduceResult reduce_index_relation(const ExecutionFragment& frag, const ExecutionFragment& frag_b,
                                   const IndexRelation& idx) {
    // The canonical pair sequence never visits crossing pairs, so the input
    // need not be monotone; bounds, totality and the label conditions are
    // still required.
    auto verdict = check_conditions(frag, frag_b, nullptr, idx, false);
    if (!verdict.accepted) {
        throw CertificateError("reduce: input is not an index relation (violates " +
                               to_string(*verdict.violated) + ")");
    }
    const std::size_t n = frag.length();

    IndexRelation reduced;
    std::size_t i = 0;
    std::size_t j = 0;
    reduced.insert(0, 0);
    while (i < n) {
        if (idx.contains(i + 1, j + 1)) {
            i = i + 1;
            j = j + 1;
        } else if (idx.contains(i + 1, j)) {
            i = i + 1;
        } else if (idx.contains(i, j + 1)) {
            j = j + 1;
        } else {
            throw Error("reduce: pair sequence stuck; input relation is inconsistent");
        }
        reduced.insert(i, j);
    }
    return ReduceResult{frag_b.prefix(j), std::move(reduced)};
}

IndexRelation compose_index_relations(const IndexRelation& first, const IndexRelation& second) {
    IndexRelation result;
    for (const auto& [i, j] : first.pairs()) {
        for (const auto& [jj, k] : second.pairs()) {
            if (jj == j) {
                result.insert(i, k);
            }
        }
    }
    return result;
}

}  // namespace normsim
