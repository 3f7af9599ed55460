#include <map>
#include <sstream>
#include <vector>

#include "normsim/errors.hpp"
#include "normsim/spec_lang.hpp"

namespace normsim {

namespace {

// ---------------------------------------------------------------------------
// SMT-LIB rendering. Nat maps to Int with nonnegativity hypotheses, Seq[Nat]
// to the sequence theory. Primed variables render as quoted symbols |x'|.
// ---------------------------------------------------------------------------

std::string smt_sort(BaseType type) {
    switch (type) {
        case BaseType::boolean: return "Bool";
        case BaseType::natural: return "Int";
        case BaseType::nat_seq: return "(Seq Int)";
    }
    return "?";
}

std::string smt_symbol(const std::string& name, bool primed) {
    return primed ? "|" + name + "'|" : name;
}

std::string smt_expr(const ExprPtr& expr) {
    switch (expr->kind) {
        case ExprKind::bool_const:
            return expr->bool_value ? "true" : "false";
        case ExprKind::nat_const:
            return std::to_string(expr->nat_value);
        case ExprKind::empty_seq:
            return "(as seq.empty (Seq Int))";
        case ExprKind::var:
            return smt_symbol(expr->var_name, expr->primed);
        case ExprKind::eq:
            return "(= " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) + ")";
        case ExprKind::neq:
            return "(not (= " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) +
                   "))";
        case ExprKind::and_op:
            return "(and " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) + ")";
        case ExprKind::or_op:
            return "(or " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) + ")";
        case ExprKind::implies:
            return "(=> " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) + ")";
        case ExprKind::less:
            return "(< " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) + ")";
        case ExprKind::append:
            return "(seq.++ " + smt_expr(expr->children[0]) + " (seq.unit " +
                   smt_expr(expr->children[1]) + "))";
        case ExprKind::concat:
            return "(seq.++ " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) +
                   ")";
        case ExprKind::head:
            return "(seq.nth " + smt_expr(expr->children[0]) + " 0)";
        case ExprKind::tail:
            return "(seq.extract " + smt_expr(expr->children[0]) + " 1 (- (seq.len " +
                   smt_expr(expr->children[0]) + ") 1))";
        case ExprKind::ite:
            return "(ite " + smt_expr(expr->children[0]) + " " + smt_expr(expr->children[1]) +
                   " " + smt_expr(expr->children[2]) + ")";
    }
    throw Error("unhandled expression kind in SMT rendering");
}

struct DeclaredVar {
    std::string name;
    bool primed;
    BaseType type;
};

// Emits one assertion group: declarations, nonnegativity hypotheses for Nat
// variables, the negated formula, check-sat.
void emit_group(std::ostringstream& out, const std::string& name, const ExprPtr& formula,
                const SpecAst& lower, const SpecAst& upper, const ActionDecl* action) {
    std::set<std::pair<std::string, bool>> used;
    for (const auto& var : free_vars(formula)) {
        used.insert(var);
    }
    std::vector<DeclaredVar> decls;
    auto add = [&](const std::string& var, bool primed, BaseType type) {
        if (used.count({var, primed})) {
            decls.push_back({var, primed, type});
        }
    };
    for (const auto& [var, type] : lower.state_vars) {
        add(var, false, type);
    }
    for (const auto& [var, type] : lower.state_vars) {
        add(var, true, type);
    }
    for (const auto& [var, type] : upper.state_vars) {
        add(var, false, type);
    }
    for (const auto& [var, type] : upper.state_vars) {
        add(var, true, type);
    }
    if (action != nullptr) {
        for (const auto& [param, type] : action->params) {
            add(param, false, type);
        }
    }

    out << "(push)\n";
    for (const auto& decl : decls) {
        out << "(declare-const " << smt_symbol(decl.name, decl.primed) << " "
            << smt_sort(decl.type) << ")\n";
    }
    for (const auto& decl : decls) {
        if (decl.type == BaseType::natural) {
            out << "(assert (>= " << smt_symbol(decl.name, decl.primed) << " 0))\n";
        }
    }
    out << "(assert (! (not " << smt_expr(formula) << ") :named " << name << "))\n";
    out << "(check-sat)\n";
    out << "(pop)\n";
}

void check_alphabets(const SpecAst& lower, const SpecAst& upper) {
    for (const auto& [var, type] : lower.state_vars) {
        if (upper.var_type(var)) {
            throw Error("state variable " + var + " appears in both specifications");
        }
    }
    for (const auto& action : lower.actions) {
        const ActionDecl* other = upper.find_action(action.name);
        if (other == nullptr) {
            throw Error("alphabet mismatch: upper specification lacks action " + action.name);
        }
        if (other->params.size() != action.params.size()) {
            throw Error("alphabet mismatch: action " + action.name +
                        " has different parameter counts");
        }
        for (std::size_t i = 0; i < action.params.size(); ++i) {
            if (action.params[i].first != other->params[i].first) {
                throw Error("alphabet mismatch: action " + action.name +
                            " names its parameters differently in the two specifications");
            }
            if (action.params[i].second != other->params[i].second) {
                throw Error("parameter type mismatch on action " + action.name + ", parameter " +
                            action.params[i].first);
            }
        }
    }
}

ExprPtr conjoin(const std::vector<ExprPtr>& parts) {
    if (parts.empty()) {
        return make_bool(true);
    }
    ExprPtr out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
        out = make_binary(ExprKind::and_op, parts[i], out);
    }
    return out;
}

ExprPtr disjoin(const std::vector<ExprPtr>& parts) {
    if (parts.empty()) {
        return make_bool(false);
    }
    ExprPtr out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
        out = make_binary(ExprKind::or_op, parts[i], out);
    }
    return out;
}

std::vector<ExprPtr> flatten(const ExprPtr& expr, ExprKind op, bool unit_value) {
    if (expr->kind == op) {
        auto lhs = flatten(expr->children[0], op, unit_value);
        auto rhs = flatten(expr->children[1], op, unit_value);
        lhs.insert(lhs.end(), rhs.begin(), rhs.end());
        return lhs;
    }
    if (expr->kind == ExprKind::bool_const && expr->bool_value == unit_value) {
        return {};  // the unit of the connective contributes nothing
    }
    return {expr};
}

bool vars_within(const ExprPtr& expr, const std::set<std::pair<std::string, bool>>& allowed) {
    for (const auto& var : free_vars(expr)) {
        if (!allowed.count(var)) {
            return false;
        }
    }
    return true;
}

// One disjunct of an explicitly-listed transition predicate: a precondition
// over the upper state and parameters, plus one effect expression per upper
// state variable.
struct TransitionCase {
    ExprPtr precondition;
    std::map<std::string, ExprPtr> effects;
};

std::vector<std::map<std::string, ExprPtr>> recognize_listed_start(const SpecAst& upper) {
    std::vector<std::map<std::string, ExprPtr>> cases;
    for (const auto& disjunct : flatten(upper.initial, ExprKind::or_op, false)) {
        std::map<std::string, ExprPtr> defs;
        for (const auto& conjunct : flatten(disjunct, ExprKind::and_op, true)) {
            const bool is_definition = conjunct->kind == ExprKind::eq &&
                                       conjunct->children[0]->kind == ExprKind::var &&
                                       !conjunct->children[0]->primed &&
                                       upper.var_type(conjunct->children[0]->var_name) &&
                                       free_vars(conjunct->children[1]).empty();
            if (!is_definition) {
                throw AssumptionViolated("finitestart",
                                         "initial condition of " + upper.name +
                                             " is not a listed form in: " + print_expr(conjunct));
            }
            if (!defs.emplace(conjunct->children[0]->var_name, conjunct->children[1]).second) {
                throw AssumptionViolated("finitestart",
                                         "variable " + conjunct->children[0]->var_name +
                                             " defined twice in a start disjunct");
            }
        }
        for (const auto& [var, type] : upper.state_vars) {
            if (!defs.count(var)) {
                throw AssumptionViolated("finitestart", "variable " + var +
                                                            " not defined in a start disjunct");
            }
        }
        cases.push_back(std::move(defs));
    }
    return cases;
}

std::vector<TransitionCase> recognize_listed_transitions(const SpecAst& upper,
                                                         const std::string& action_name) {
    const ActionDecl* action = upper.find_action(action_name);
    std::set<std::pair<std::string, bool>> unprimed_env;
    for (const auto& [var, type] : upper.state_vars) {
        unprimed_env.insert({var, false});
    }
    for (const auto& [param, type] : action->params) {
        unprimed_env.insert({param, false});
    }
    std::vector<TransitionCase> cases;
    for (const auto& disjunct : flatten(upper.transitions.at(action_name), ExprKind::or_op, false)) {
        TransitionCase tcase;
        std::vector<ExprPtr> preconditions;
        for (const auto& conjunct : flatten(disjunct, ExprKind::and_op, true)) {
            const bool is_effect = conjunct->kind == ExprKind::eq &&
                                   conjunct->children[0]->kind == ExprKind::var &&
                                   conjunct->children[0]->primed &&
                                   upper.var_type(conjunct->children[0]->var_name) &&
                                   vars_within(conjunct->children[1], unprimed_env);
            if (is_effect) {
                if (!tcase.effects.emplace(conjunct->children[0]->var_name, conjunct->children[1])
                         .second) {
                    throw AssumptionViolated("finitetransitions",
                                             "variable " + conjunct->children[0]->var_name +
                                                 "' defined twice in a disjunct of action " +
                                                 action_name);
                }
                continue;
            }
            if (!vars_within(conjunct, unprimed_env)) {
                throw AssumptionViolated(
                    "finitetransitions",
                    "predicate of action " + action_name +
                        " is not a listed form in: " + print_expr(conjunct));
            }
            preconditions.push_back(conjunct);
        }
        for (const auto& [var, type] : upper.state_vars) {
            if (!tcase.effects.count(var)) {
                throw AssumptionViolated("finitetransitions",
                                         "variable " + var +
                                             "' not defined in a disjunct of action " +
                                             action_name);
            }
        }
        tcase.precondition = conjoin(preconditions);
        cases.push_back(std::move(tcase));
    }
    return cases;
}

ExprPtr theta_with_extras(const SpecAst& lower, const SpecAst& upper,
                          const SymbolicCertificate& cert) {
    // Validate the refinement shape of rho and fold non-definition conjuncts
    // (over lower variables only) into theta.
    std::set<std::pair<std::string, bool>> lower_vars;
    for (const auto& [var, type] : lower.state_vars) {
        lower_vars.insert({var, false});
    }
    std::map<std::string, ExprPtr> defs;
    std::vector<ExprPtr> extras{cert.theta};
    for (const auto& conjunct : flatten(cert.rho, ExprKind::and_op, true)) {
        const bool is_definition = conjunct->kind == ExprKind::eq &&
                                   conjunct->children[0]->kind == ExprKind::var &&
                                   !conjunct->children[0]->primed &&
                                   upper.var_type(conjunct->children[0]->var_name) &&
                                   vars_within(conjunct->children[1], lower_vars);
        if (is_definition) {
            if (!defs.emplace(conjunct->children[0]->var_name, conjunct->children[1]).second) {
                throw CertificateError("certificate is not refinement-shaped: " +
                                       conjunct->children[0]->var_name + " defined twice");
            }
            continue;
        }
        if (!vars_within(conjunct, lower_vars)) {
            throw CertificateError(
                "certificate is not refinement-shaped: conjunct mixes variables: " +
                print_expr(conjunct));
        }
        extras.push_back(conjunct);
    }
    for (const auto& [var, type] : upper.state_vars) {
        if (!defs.count(var)) {
            throw CertificateError("certificate is not refinement-shaped: no definition for " +
                                   var);
        }
    }
    return conjoin(extras);
}

}  // namespace

std::string vcgen_refinement(const SpecAst& lower, const SpecAst& upper,
                             const SymbolicCertificate& cert) {
    check_alphabets(lower, upper);
    ExprPtr theta = theta_with_extras(lower, upper, cert);
    const ExprPtr& rho = cert.rho;
    ExprPtr rho_primed = prime_vars(rho);
    ExprPtr theta_primed = prime_vars(theta);

    std::ostringstream out;
    out << "; step refinement conditions: " << lower.name << " -> " << upper.name << "\n";
    out << "(set-logic ALL)\n";

    emit_group(out, "start-domain", make_binary(ExprKind::implies, lower.initial, theta), lower,
               upper, nullptr);
    emit_group(out, "start-image",
               make_binary(ExprKind::implies,
                           make_binary(ExprKind::and_op, lower.initial, rho), upper.initial),
               lower, upper, nullptr);
    for (const auto& action : lower.actions) {
        const ExprPtr& phi = lower.transitions.at(action.name);
        emit_group(out, "domain-" + action.name,
                   make_binary(ExprKind::implies, make_binary(ExprKind::and_op, phi, theta),
                               theta_primed),
                   lower, upper, &action);
    }
    for (const auto& action : lower.actions) {
        if (action.name == "tau") {
            continue;
        }
        const ExprPtr& phi = lower.transitions.at(action.name);
        ExprPtr hypothesis = make_binary(
            ExprKind::and_op, phi, make_binary(ExprKind::and_op, rho, rho_primed));
        emit_group(out, "transfer-" + action.name,
                   make_binary(ExprKind::implies, hypothesis,
                               upper.transitions.at(action.name)),
                   lower, upper, &action);
    }
    {
        const ExprPtr& phi = lower.transitions.at("tau");
        std::vector<ExprPtr> stutter;
        for (const auto& [var, type] : upper.state_vars) {
            stutter.push_back(make_binary(ExprKind::eq, make_var(var, false, type),
                                          make_var(var, true, type)));
        }
        ExprPtr hypothesis = make_binary(
            ExprKind::and_op, phi, make_binary(ExprKind::and_op, rho, rho_primed));
        ExprPtr conclusion =
            make_binary(ExprKind::or_op, upper.transitions.at("tau"), conjoin(stutter));
        emit_group(out, "transfer-tau", make_binary(ExprKind::implies, hypothesis, conclusion),
                   lower, upper, nullptr);
    }
    return out.str();
}

std::string vcgen_forward(const SpecAst& lower, const SpecAst& upper,
                          const SymbolicCertificate& cert) {
    check_alphabets(lower, upper);
    const ExprPtr& rho = cert.rho;
    ExprPtr rho_primed = prime_vars(rho);

    auto start_cases = recognize_listed_start(upper);
    std::map<std::string, std::vector<TransitionCase>> transition_cases;
    for (const auto& action : lower.actions) {
        transition_cases.emplace(action.name, recognize_listed_transitions(upper, action.name));
    }
    const auto& tau_cases = transition_cases.at("tau");

    auto substitute_unprimed = [&](const ExprPtr& expr,
                                   const std::map<std::string, ExprPtr>& defs) {
        Substitution subst;
        for (const auto& [var, def] : defs) {
            subst[{var, false}] = def;
        }
        return substitute(expr, subst);
    };
    auto substitute_primed = [&](const ExprPtr& expr, const std::map<std::string, ExprPtr>& defs) {
        Substitution subst;
        for (const auto& [var, def] : defs) {
            subst[{var, true}] = def;
        }
        return substitute(expr, subst);
    };

    auto norm_of = [&](const std::string& action_name) {
        auto it = cert.norms.find(action_name);
        return it == cert.norms.end() ? make_nat(0) : it->second;
    };

    std::ostringstream out;
    out << "; normed forward simulation conditions: " << lower.name << " -> " << upper.name
        << "\n";
    out << "(set-logic ALL)\n";

    {
        std::vector<ExprPtr> disjuncts;
        for (const auto& defs : start_cases) {
            disjuncts.push_back(substitute_unprimed(rho, defs));
        }
        emit_group(out, "start", make_binary(ExprKind::implies, lower.initial, disjoin(disjuncts)),
                   lower, upper, nullptr);
    }

    // Internal moves of the upper automaton that re-establish rho for the
    // current lower state while strictly decreasing the norm.
    auto descent_disjuncts = [&](const ExprPtr& norm) {
        std::vector<ExprPtr> out_disjuncts;
        for (const auto& tcase : tau_cases) {
            ExprPtr moved_rho = substitute_unprimed(rho, tcase.effects);
            ExprPtr moved_norm = substitute_unprimed(norm, tcase.effects);
            out_disjuncts.push_back(make_binary(
                ExprKind::and_op, tcase.precondition,
                make_binary(ExprKind::and_op, moved_rho,
                            make_binary(ExprKind::less, moved_norm, norm))));
        }
        return out_disjuncts;
    };

    for (const auto& action : lower.actions) {
        if (action.name == "tau") {
            continue;
        }
        std::vector<ExprPtr> disjuncts;
        for (const auto& tcase : transition_cases.at(action.name)) {
            disjuncts.push_back(make_binary(ExprKind::and_op, tcase.precondition,
                                            substitute_primed(rho_primed, tcase.effects)));
        }
        for (auto& descent : descent_disjuncts(norm_of(action.name))) {
            disjuncts.push_back(std::move(descent));
        }
        ExprPtr hypothesis =
            make_binary(ExprKind::and_op, lower.transitions.at(action.name), rho);
        emit_group(out, "transfer-" + action.name,
                   make_binary(ExprKind::implies, hypothesis, disjoin(disjuncts)), lower, upper,
                   &action);
    }

    {
        std::vector<ExprPtr> disjuncts;
        // Stutter: the target lower state stays related to the same upper state.
        Substitution unprime;
        for (const auto& [var, type] : upper.state_vars) {
            unprime[{var, true}] = make_var(var, false, type);
        }
        disjuncts.push_back(substitute(rho_primed, unprime));
        for (const auto& tcase : tau_cases) {
            disjuncts.push_back(make_binary(ExprKind::and_op, tcase.precondition,
                                            substitute_primed(rho_primed, tcase.effects)));
        }
        for (auto& descent : descent_disjuncts(norm_of("tau"))) {
            disjuncts.push_back(std::move(descent));
        }
        ExprPtr hypothesis = make_binary(ExprKind::and_op, lower.transitions.at("tau"), rho);
        emit_group(out, "transfer-tau",
                   make_binary(ExprKind::implies, hypothesis, disjoin(disjuncts)), lower, upper,
                   nullptr);
    }
    return out.str();
}

}  // namespace normsim
