#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normsim/lts.hpp"

namespace normsim {

enum class BaseType { boolean, natural, nat_seq };

std::string to_string(BaseType type);

enum class ExprKind {
    bool_const,
    nat_const,
    empty_seq,
    var,
    eq,
    neq,
    and_op,
    or_op,
    implies,
    less,
    append,  // seq |- elem
    concat,  // seq || seq
    head,
    tail,
    ite,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    BaseType type = BaseType::boolean;
    bool bool_value = false;
    std::uint64_t nat_value = 0;
    std::string var_name;
    bool primed = false;
    std::vector<ExprPtr> children;
};

ExprPtr make_bool(bool value);
ExprPtr make_nat(std::uint64_t value);
ExprPtr make_empty_seq();
ExprPtr make_var(std::string name, bool primed, BaseType type);
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_unary(ExprKind kind, ExprPtr child);
ExprPtr make_ite(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);

bool expr_equal(const ExprPtr& lhs, const ExprPtr& rhs);
std::string print_expr(const ExprPtr& expr);

// (name, primed) -> replacement; capture-free since the language has no binders.
using Substitution = std::map<std::pair<std::string, bool>, ExprPtr>;
ExprPtr substitute(const ExprPtr& expr, const Substitution& subst);
// Replace every unprimed variable with its primed copy.
ExprPtr prime_vars(const ExprPtr& expr);
std::vector<std::pair<std::string, bool>> free_vars(const ExprPtr& expr);

struct Value {
    BaseType type = BaseType::boolean;
    bool b = false;
    std::uint64_t n = 0;
    std::vector<std::uint64_t> seq;

    static Value of_bool(bool v);
    static Value of_nat(std::uint64_t v);
    static Value of_seq(std::vector<std::uint64_t> v);
    std::string str() const;
    bool operator==(const Value&) const = default;
};

using Valuation = std::map<std::pair<std::string, bool>, Value>;

// Evaluation is partial: head/tail of the empty sequence yield nullopt, which
// conjunction and disjunction absorb when the other side decides.
std::optional<Value> eval_expr(const ExprPtr& expr, const Valuation& env);

struct ActionDecl {
    std::string name;
    std::vector<std::pair<std::string, BaseType>> params;
};

struct SpecAst {
    std::string name;
    std::vector<std::pair<std::string, BaseType>> state_vars;
    ExprPtr initial;
    std::vector<ActionDecl> actions;  // declaration order, tau included
    std::map<std::string, ExprPtr> transitions;

    const ActionDecl* find_action(const std::string& name) const;
    std::optional<BaseType> var_type(const std::string& name) const;
};

// Parses and typechecks an automaton specification. Grammar keywords:
// automaton, states, initial condition, actions, transitions, action,
// predicate. Every action, including tau, must have exactly one transition
// predicate, and tau takes no parameters.
SpecAst parse_spec(const std::string& text);
std::string print_spec(const SpecAst& spec);

struct Bounds {
    std::uint64_t nat_max = 2;  // naturals range over 0..nat_max-1
    std::uint64_t seq_max = 2;  // maximum sequence length
};

inline constexpr std::size_t kDefaultMaxElaboratedStates = 100000;

// Explicit-state elaboration over all valuations within bounds. Transitions
// whose target leaves the bounds are dropped (disabled at the boundary).
Automaton elaborate_explicit(const SpecAst& spec, const Bounds& bounds,
                             std::size_t max_states = kDefaultMaxElaboratedStates);

// Canonical state id of a valuation, as used by elaborate_explicit.
std::string state_id_of(const SpecAst& spec, const Valuation& valuation);
std::vector<Valuation> enumerate_valuations(const SpecAst& spec, const Bounds& bounds,
                                            std::size_t max_states = kDefaultMaxElaboratedStates);

struct SymbolicCertificate {
    ExprPtr rho;                            // over X (lower) and Y (upper)
    ExprPtr theta;                          // over X; defaults to true
    std::map<std::string, ExprPtr> norms;   // per action name; absent means 0
};

// Text format: `rho = <formula>`, optional `theta = <formula>`, and
// `norm <action> = <expr>` entries; entries may span lines.
SymbolicCertificate parse_symbolic_certificate(const std::string& text, const SpecAst& lower,
                                               const SpecAst& upper);

// SMT-LIB verification conditions for a step refinement certificate from
// lower to upper: five named assertion groups, each negated inside its own
// push/check-sat/pop scope.
std::string vcgen_refinement(const SpecAst& lower, const SpecAst& upper,
                             const SymbolicCertificate& cert);

// Quantifier-eliminated normed forward simulation conditions. Requires the
// upper specification's initial condition and transition predicates in
// explicitly listed form; violations raise AssumptionViolated.
std::string vcgen_forward(const SpecAst& lower, const SpecAst& upper,
                          const SymbolicCertificate& cert);

// Well-formedness check for emitted SMT-LIB text: balanced S-expressions,
// every top-level form a list.
bool validate_sexpr(const std::string& text, std::string* error = nullptr);

}  // namespace normsim
