#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>

#include "normsim/lts.hpp"

namespace normsim {

// A relation between the index sets of two execution fragments.
class IndexRelation {
public:
    using Pair = std::pair<std::size_t, std::size_t>;

    IndexRelation() = default;
    explicit IndexRelation(std::set<Pair> pairs) : pairs_(std::move(pairs)) {}

    const std::set<Pair>& pairs() const { return pairs_; }
    bool contains(std::size_t i, std::size_t j) const { return pairs_.count({i, j}) != 0; }
    void insert(std::size_t i, std::size_t j) { pairs_.insert({i, j}); }
    bool empty() const { return pairs_.empty(); }
    std::size_t size() const { return pairs_.size(); }

    bool operator==(const IndexRelation&) const = default;

private:
    std::set<Pair> pairs_;
};

enum class IndexCondition {
    states_related,
    monotone,
    total_left,
    total_right,
    square_label,
    left_triangle_tau,
    right_triangle_tau,
};

std::string to_string(IndexCondition c);

struct CorrespondenceVerdict {
    bool accepted = false;
    std::optional<IndexCondition> violated;
    std::optional<IndexRelation::Pair> witness;

    static CorrespondenceVerdict ok() { return {true, std::nullopt, std::nullopt}; }
    static CorrespondenceVerdict fail(IndexCondition c, IndexRelation::Pair w) {
        return {false, c, w};
    }
};

// Checks the four defining conditions of an index relation between frag and
// frag_b under relation rel. Out-of-bounds indices are reported as a
// states-related violation rather than an error.
CorrespondenceVerdict check_index_relation(const ExecutionFragment& frag,
                                           const ExecutionFragment& frag_b, const Relation& rel,
                                           const IndexRelation& idx);

// Conditions (2)-(4) only; used where no state relation is in play.
CorrespondenceVerdict check_index_relation_structure(const ExecutionFragment& frag,
                                                     const ExecutionFragment& frag_b,
                                                     const IndexRelation& idx);

// Searches for a witness index relation by dynamic programming over the
// (i, j) grid with square / left-triangle / right-triangle moves. Returns the
// lexicographically least witness by (size, sorted pair order), or nullopt.
std::optional<IndexRelation> find_correspondence(const ExecutionFragment& frag,
                                                 const ExecutionFragment& frag_b,
                                                 const Relation& rel);

bool is_reduced(const ExecutionFragment& frag, const ExecutionFragment& frag_b,
                const IndexRelation& idx);

struct ReduceResult {
    ExecutionFragment prefix;  // prefix of the second fragment
    IndexRelation relation;
};

// Reduces an index relation to an N-free one relating final indices uniquely,
// following the canonical pair sequence with priority square > left triangle
// > right triangle. The input must be a structurally valid index relation.
ReduceResult reduce_index_relation(const ExecutionFragment& frag, const ExecutionFragment& frag_b,
                                   const IndexRelation& idx);

// Relational composition: (i, k) whenever (i, j) in first and (j, k) in second.
IndexRelation compose_index_relations(const IndexRelation& first, const IndexRelation& second);

}  // namespace normsim
