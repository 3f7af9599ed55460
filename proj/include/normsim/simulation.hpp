#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "normsim/lts.hpp"

namespace normsim {

// Norm keys are steps of the lower automaton, plus its start states for
// backward certificates.
using NormKey = std::variant<Step, State>;

// Partial table of natural-number norm values; absent entries read as 0.
class NormTable {
public:
    std::uint64_t get(const NormKey& key, const State& u) const;
    std::uint64_t get(const Step& step, const State& u) const { return get(NormKey{step}, u); }
    void set(const NormKey& key, const State& u, std::uint64_t value);

    const std::map<std::pair<NormKey, State>, std::uint64_t>& entries() const { return entries_; }

    bool operator==(const NormTable&) const = default;

private:
    std::map<std::pair<NormKey, State>, std::uint64_t> entries_;  // nonzero values only
};

struct RefinementCert {
    PartialStateMap map;  // states(A) -> states(B)
};

struct ForwardCert {
    Relation rel;  // subset of states(A) x states(B)
    NormTable norm;
};

struct BackwardCert {
    Relation rel;
    NormTable norm;
    std::optional<std::set<State>> q;  // absent means states(B)
};

struct HistoryCert {
    PartialStateMap map;  // states(B) -> states(A)
    NormTable norm;
};

struct ProphecyCert {
    PartialStateMap map;  // states(B) -> states(A)
    NormTable norm;
    bool image_finite_required = false;
};

using Certificate = std::variant<RefinementCert, ForwardCert, BackwardCert, HistoryCert, ProphecyCert>;

enum class CertificateKind { refinement, forward, backward, history, prophecy };

CertificateKind kind_of(const Certificate& cert);
std::string to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(const std::string& text);

enum class CheckMode { plain, adapted };

struct Violation {
    std::string condition;      // e.g. "forward-2c"
    std::optional<Step> step;   // offending step, when the trigger is a step
    std::optional<State> state; // offending state, when the trigger is a state
    std::optional<State> related;
    std::string detail;
};

struct CheckReport {
    bool accepted = true;
    std::vector<Violation> violations;
    bool truncated = false;  // violation list hit the cap
    std::optional<std::size_t> max_image;

    void add(Violation v, std::size_t cap);
};

inline constexpr std::size_t kDefaultMaxViolations = 10;

CheckReport check_step_refinement(const Automaton& a, const Automaton& b, const PartialStateMap& r,
                                  CheckMode mode = CheckMode::plain,
                                  std::size_t max_violations = kDefaultMaxViolations);

CheckReport check_normed_forward(const Automaton& a, const Automaton& b, const Relation& f,
                                 const NormTable& norm, CheckMode mode = CheckMode::plain,
                                 std::size_t max_violations = kDefaultMaxViolations);

CheckReport check_normed_backward(const Automaton& a, const Automaton& b, const Relation& rel,
                                  const NormTable& norm,
                                  const std::optional<std::set<State>>& q = std::nullopt,
                                  CheckMode mode = CheckMode::plain,
                                  std::size_t max_violations = kDefaultMaxViolations);

struct ImageFiniteReport {
    bool image_finite = true;  // explicit relations are always image-finite
    std::size_t max_image = 0;
};

ImageFiniteReport check_image_finite(const Relation& rel);

CheckReport check_branching_forward(const Automaton& a, const Automaton& b, const Relation& f,
                                    std::size_t max_violations = kDefaultMaxViolations);

CheckReport check_branching_backward(const Automaton& a, const Automaton& b, const Relation& rel,
                                     std::size_t max_violations = kDefaultMaxViolations);

// Norm synthesis from an accepted branching simulation: shortest related
// fragment lengths per (step, state). Throws CertificateError when the
// branching check rejects.
NormTable norm_from_branching_forward(const Automaton& a, const Automaton& b, const Relation& f);
NormTable norm_from_branching_backward(const Automaton& a, const Automaton& b, const Relation& rel);

// Tolerant distance tables: entries absent where no related fragment exists.
// These back both the branching checks and the norm synthesis.
NormTable branching_forward_distances(const Automaton& a, const Automaton& b, const Relation& f);
NormTable branching_backward_distances(const Automaton& a, const Automaton& b, const Relation& rel);

CheckReport check_history(const Automaton& a, const Automaton& b, const PartialStateMap& r,
                          const NormTable& norm, CheckMode mode = CheckMode::plain,
                          std::size_t max_violations = kDefaultMaxViolations);

CheckReport check_prophecy(const Automaton& a, const Automaton& b, const PartialStateMap& r,
                           const NormTable& norm, bool image_finite_required = false,
                           CheckMode mode = CheckMode::plain,
                           std::size_t max_violations = kDefaultMaxViolations);

CheckReport check_certificate(const Automaton& a, const Automaton& b, const Certificate& cert,
                              CheckMode mode = CheckMode::plain,
                              std::size_t max_violations = kDefaultMaxViolations);

// Greatest branching forward/backward simulation candidates, computed by
// fixpoint refinement from the full relation. The result satisfies the step
// conditions; start/totality conditions are the caller's to check.
Relation greatest_branching_forward(const Automaton& a, const Automaton& b);
Relation greatest_branching_backward(const Automaton& a, const Automaton& b);

inline constexpr std::size_t kDefaultSearchBudget = 10000;

// Searches for a certificate of the given kind. Forward and backward kinds
// search the branching variant and synthesize the norm; nullopt means no
// certificate of that kind exists.
std::optional<Certificate> find_certificate(const Automaton& a, const Automaton& b,
                                            CertificateKind kind,
                                            std::size_t budget = kDefaultSearchBudget);

}  // namespace normsim
