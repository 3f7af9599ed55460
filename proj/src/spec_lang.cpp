#include "normsim/spec_lang.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace normsim {

std::string to_string(BaseType type) {
    switch (type) {
        case BaseType::boolean: return "Bool";
        case BaseType::natural: return "Nat";
        case BaseType::nat_seq: return "Seq[Nat]";
    }
    return "?";
}

ExprPtr make_bool(bool value) {
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::bool_const;
    node->type = BaseType::boolean;
    node->bool_value = value;
    return node;
}

ExprPtr make_nat(std::uint64_t value) {
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::nat_const;
    node->type = BaseType::natural;
    node->nat_value = value;
    return node;
}

ExprPtr make_empty_seq() {
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::empty_seq;
    node->type = BaseType::nat_seq;
    return node;
}

ExprPtr make_var(std::string name, bool primed, BaseType type) {
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::var;
    node->type = type;
    node->var_name = std::move(name);
    node->primed = primed;
    return node;
}

namespace {

std::string type_mismatch(const std::string& what, const ExprPtr& offending) {
    return what + " in: " + print_expr(offending);
}

}  // namespace

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
    auto node = std::make_shared<Expr>();
    node->kind = kind;
    node->children = {lhs, rhs};
    switch (kind) {
        case ExprKind::eq:
        case ExprKind::neq:
            if (lhs->type != rhs->type) {
                throw TypeError(type_mismatch("equality between different types", node));
            }
            node->type = BaseType::boolean;
            break;
        case ExprKind::and_op:
        case ExprKind::or_op:
        case ExprKind::implies:
            if (lhs->type != BaseType::boolean || rhs->type != BaseType::boolean) {
                throw TypeError(type_mismatch("connective needs Bool operands", node));
            }
            node->type = BaseType::boolean;
            break;
        case ExprKind::less:
            if (lhs->type != BaseType::natural || rhs->type != BaseType::natural) {
                throw TypeError(type_mismatch("< needs Nat operands", node));
            }
            node->type = BaseType::boolean;
            break;
        case ExprKind::append:
            if (lhs->type != BaseType::nat_seq || rhs->type != BaseType::natural) {
                throw TypeError(type_mismatch("|- needs Seq[Nat] and Nat", node));
            }
            node->type = BaseType::nat_seq;
            break;
        case ExprKind::concat:
            if (lhs->type != BaseType::nat_seq || rhs->type != BaseType::nat_seq) {
                throw TypeError(type_mismatch("|| needs Seq[Nat] operands", node));
            }
            node->type = BaseType::nat_seq;
            break;
        default:
            throw TypeError("not a binary operator");
    }
    return node;
}

ExprPtr make_unary(ExprKind kind, ExprPtr child) {
    auto node = std::make_shared<Expr>();
    node->kind = kind;
    node->children = {child};
    if (child->type != BaseType::nat_seq) {
        throw TypeError(type_mismatch("head/tail need a Seq[Nat] operand", node));
    }
    node->type = kind == ExprKind::head ? BaseType::natural : BaseType::nat_seq;
    return node;
}

ExprPtr make_ite(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::ite;
    node->children = {cond, then_branch, else_branch};
    if (cond->type != BaseType::boolean) {
        throw TypeError(type_mismatch("if condition must be Bool", node));
    }
    if (then_branch->type != else_branch->type) {
        throw TypeError(type_mismatch("if branches must have the same type", node));
    }
    node->type = then_branch->type;
    return node;
}

bool expr_equal(const ExprPtr& lhs, const ExprPtr& rhs) {
    if (lhs->kind != rhs->kind) {
        return false;
    }
    switch (lhs->kind) {
        case ExprKind::bool_const:
            return lhs->bool_value == rhs->bool_value;
        case ExprKind::nat_const:
            return lhs->nat_value == rhs->nat_value;
        case ExprKind::empty_seq:
            return true;
        case ExprKind::var:
            return lhs->var_name == rhs->var_name && lhs->primed == rhs->primed;
        default:
            break;
    }
    if (lhs->children.size() != rhs->children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < lhs->children.size(); ++i) {
        if (!expr_equal(lhs->children[i], rhs->children[i])) {
            return false;
        }
    }
    return true;
}

std::string print_expr(const ExprPtr& expr) {
    switch (expr->kind) {
        case ExprKind::bool_const:
            return expr->bool_value ? "true" : "false";
        case ExprKind::nat_const:
            return std::to_string(expr->nat_value);
        case ExprKind::empty_seq:
            return "{}";
        case ExprKind::var:
            return expr->var_name + (expr->primed ? "'" : "");
        case ExprKind::head:
            return "head(" + print_expr(expr->children[0]) + ")";
        case ExprKind::tail:
            return "tail(" + print_expr(expr->children[0]) + ")";
        case ExprKind::ite:
            return "(if " + print_expr(expr->children[0]) + " then " +
                   print_expr(expr->children[1]) + " else " + print_expr(expr->children[2]) + ")";
        default:
            break;
    }
    const char* op = nullptr;
    switch (expr->kind) {
        case ExprKind::eq: op = "="; break;
        case ExprKind::neq: op = "~="; break;
        case ExprKind::and_op: op = "/\\"; break;
        case ExprKind::or_op: op = "\\/"; break;
        case ExprKind::implies: op = "=>"; break;
        case ExprKind::less: op = "<"; break;
        case ExprKind::append: op = "|-"; break;
        case ExprKind::concat: op = "||"; break;
        default: op = "?"; break;
    }
    return "(" + print_expr(expr->children[0]) + " " + op + " " + print_expr(expr->children[1]) +
           ")";
}

ExprPtr substitute(const ExprPtr& expr, const Substitution& subst) {
    switch (expr->kind) {
        case ExprKind::bool_const:
        case ExprKind::nat_const:
        case ExprKind::empty_seq:
            return expr;
        case ExprKind::var: {
            auto it = subst.find({expr->var_name, expr->primed});
            if (it == subst.end()) {
                return expr;
            }
            if (it->second->type != expr->type) {
                throw TypeError("substitution changes the type of " + print_expr(expr));
            }
            return it->second;
        }
        default:
            break;
    }
    std::vector<ExprPtr> children;
    children.reserve(expr->children.size());
    bool changed = false;
    for (const auto& child : expr->children) {
        children.push_back(substitute(child, subst));
        changed = changed || children.back() != child;
    }
    if (!changed) {
        return expr;
    }
    auto node = std::make_shared<Expr>(*expr);
    node->children = std::move(children);
    return node;
}

ExprPtr prime_vars(const ExprPtr& expr) {
    if (expr->kind == ExprKind::var) {
        if (expr->primed) {
            throw TypeError("cannot prime an already primed variable: " + print_expr(expr));
        }
        return make_var(expr->var_name, true, expr->type);
    }
    if (expr->children.empty()) {
        return expr;
    }
    auto node = std::make_shared<Expr>(*expr);
    for (auto& child : node->children) {
        child = prime_vars(child);
    }
    return node;
}

std::vector<std::pair<std::string, bool>> free_vars(const ExprPtr& expr) {
    std::set<std::pair<std::string, bool>> seen;
    std::vector<std::pair<std::string, bool>> out;
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& node) {
        if (node->kind == ExprKind::var) {
            if (seen.insert({node->var_name, node->primed}).second) {
                out.push_back({node->var_name, node->primed});
            }
            return;
        }
        for (const auto& child : node->children) {
            walk(child);
        }
    };
    walk(expr);
    return out;
}

Value Value::of_bool(bool v) {
    Value value;
    value.type = BaseType::boolean;
    value.b = v;
    return value;
}

Value Value::of_nat(std::uint64_t v) {
    Value value;
    value.type = BaseType::natural;
    value.n = v;
    return value;
}

Value Value::of_seq(std::vector<std::uint64_t> v) {
    Value value;
    value.type = BaseType::nat_seq;
    value.seq = std::move(v);
    return value;
}

std::string Value::str() const {
    switch (type) {
        case BaseType::boolean:
            return b ? "true" : "false";
        case BaseType::natural:
            return std::to_string(n);
        case BaseType::nat_seq: {
            std::string out = "[";
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (i > 0) {
                    out += ",";
                }
                out += std::to_string(seq[i]);
            }
            return out + "]";
        }
    }
    return "?";
}

std::optional<Value> eval_expr(const ExprPtr& expr, const Valuation& env) {
    switch (expr->kind) {
        case ExprKind::bool_const:
            return Value::of_bool(expr->bool_value);
        case ExprKind::nat_const:
            return Value::of_nat(expr->nat_value);
        case ExprKind::empty_seq:
            return Value::of_seq({});
        case ExprKind::var: {
            auto it = env.find({expr->var_name, expr->primed});
            if (it == env.end()) {
                throw Error("unbound variable in evaluation: " + print_expr(expr));
            }
            return it->second;
        }
        case ExprKind::and_op:
        case ExprKind::or_op: {
            auto lhs = eval_expr(expr->children[0], env);
            auto rhs = eval_expr(expr->children[1], env);
            const bool absorbing = expr->kind == ExprKind::or_op;  // true absorbs for or
            if ((lhs && lhs->b == absorbing) || (rhs && rhs->b == absorbing)) {
                return Value::of_bool(absorbing);
            }
            if (!lhs || !rhs) {
                return std::nullopt;
            }
            return Value::of_bool(expr->kind == ExprKind::and_op ? (lhs->b && rhs->b)
                                                                 : (lhs->b || rhs->b));
        }
        case ExprKind::implies: {
            auto lhs = eval_expr(expr->children[0], env);
            if (lhs && !lhs->b) {
                return Value::of_bool(true);
            }
            auto rhs = eval_expr(expr->children[1], env);
            if (rhs && rhs->b) {
                return Value::of_bool(true);
            }
            if (!lhs || !rhs) {
                return std::nullopt;
            }
            return Value::of_bool(!lhs->b || rhs->b);
        }
        default:
            break;
    }
    std::vector<Value> values;
    for (const auto& child : expr->children) {
        auto value = eval_expr(child, env);
        if (!value) {
            return std::nullopt;
        }
        values.push_back(std::move(*value));
    }
    switch (expr->kind) {
        case ExprKind::eq:
            return Value::of_bool(values[0] == values[1]);
        case ExprKind::neq:
            return Value::of_bool(!(values[0] == values[1]));
        case ExprKind::less:
            return Value::of_bool(values[0].n < values[1].n);
        case ExprKind::append: {
            auto seq = values[0].seq;
            seq.push_back(values[1].n);
            return Value::of_seq(std::move(seq));
        }
        case ExprKind::concat: {
            auto seq = values[0].seq;
            seq.insert(seq.end(), values[1].seq.begin(), values[1].seq.end());
            return Value::of_seq(std::move(seq));
        }
        case ExprKind::head:
            if (values[0].seq.empty()) {
                return std::nullopt;
            }
            return Value::of_nat(values[0].seq.front());
        case ExprKind::tail: {
            if (values[0].seq.empty()) {
                return std::nullopt;
            }
            return Value::of_seq({values[0].seq.begin() + 1, values[0].seq.end()});
        }
        case ExprKind::ite:
            return values[0].b ? values[1] : values[2];
        default:
            throw Error("unhandled expression kind in evaluation");
    }
}

const ActionDecl* SpecAst::find_action(const std::string& action_name) const {
    for (const auto& action : actions) {
        if (action.name == action_name) {
            return &action;
        }
    }
    return nullptr;
}

std::optional<BaseType> SpecAst::var_type(const std::string& name) const {
    for (const auto& [var, type] : state_vars) {
        if (var == name) {
            return type;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer and parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '%') {  // comment to end of line
            while (i < text.size() && text[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token token;
        token.line = line;
        token.column = column;
        auto two = text.substr(i, 2);
        if (two == "~=" || two == "/\\" || two == "\\/" || two == "=>" || two == "|-" ||
            two == "||" || two == "{}") {
            token.text = two;
            advance(2);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_')) {
                ++j;
            }
            token.text = text.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            token.text = text.substr(i, j - i);
            advance(j - i);
        } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == ':' || c == ',' ||
                   c == '\'' || c == '=' || c == '<') {
            token.text = std::string(1, c);
            advance(1);
        } else {
            throw ParseError(line, column, std::string("unexpected character '") + c + "'");
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& peek() const {
        if (at_end()) {
            throw ParseError(last_line(), last_column(), "unexpected end of input");
        }
        return tokens_[pos_];
    }

    bool peek_is(const std::string& text) const { return !at_end() && tokens_[pos_].text == text; }

    Token take() {
        Token token = peek();
        ++pos_;
        return token;
    }

    Token expect(const std::string& text) {
        if (!peek_is(text)) {
            const Token& t = peek();
            throw ParseError(t.line, t.column, "expected '" + text + "', got '" + t.text + "'");
        }
        return take();
    }

    [[noreturn]] void fail(const std::string& message) const {
        if (at_end()) {
            throw ParseError(last_line(), last_column(), message);
        }
        throw ParseError(peek().line, peek().column, message + " (at '" + peek().text + "')");
    }

private:
    std::size_t last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }
    std::size_t last_column() const { return tokens_.empty() ? 1 : tokens_.back().column + 1; }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

bool is_identifier(const std::string& text) {
    if (text.empty() ||
        !(std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_')) {
        return false;
    }
    static const std::set<std::string> keywords = {
        "automaton", "states", "initial", "condition", "actions", "transitions",
        "action",    "predicate", "if",   "then",      "else",    "true",
        "false",     "head",      "tail", "Bool",      "Nat",     "Seq"};
    return keywords.count(text) == 0;
}

// Typing環境: name -> type, with a flag controlling whether primes are legal.
struct TypeEnv {
    std::map<std::string, BaseType> vars;     // unprimed names
    std::map<std::string, BaseType> primable; // names that may appear primed
};

class ExprParser {
public:
    ExprParser(Parser& parser, const TypeEnv& env) : parser_(parser), env_(env) {}

    ExprPtr parse() { return parse_implies(); }

private:
    ExprPtr parse_implies() {
        ExprPtr lhs = parse_or();
        if (parser_.peek_is("=>")) {
            parser_.take();
            return typed(ExprKind::implies, lhs, parse_implies());
        }
        return lhs;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (parser_.peek_is("\\/")) {
            parser_.take();
            lhs = typed(ExprKind::or_op, lhs, parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_cmp();
        while (parser_.peek_is("/\\")) {
            parser_.take();
            lhs = typed(ExprKind::and_op, lhs, parse_cmp());
        }
        return lhs;
    }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_seq();
        if (parser_.peek_is("=")) {
            parser_.take();
            return typed(ExprKind::eq, lhs, parse_seq());
        }
        if (parser_.peek_is("~=")) {
            parser_.take();
            return typed(ExprKind::neq, lhs, parse_seq());
        }
        if (parser_.peek_is("<")) {
            parser_.take();
            return typed(ExprKind::less, lhs, parse_seq());
        }
        return lhs;
    }

    ExprPtr parse_seq() {
        ExprPtr lhs = parse_primary();
        while (parser_.peek_is("|-") || parser_.peek_is("||")) {
            bool append = parser_.take().text == "|-";
            lhs = typed(append ? ExprKind::append : ExprKind::concat, lhs, parse_primary());
        }
        return lhs;
    }

    ExprPtr typed(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
        try {
            return make_binary(kind, std::move(lhs), std::move(rhs));
        } catch (const TypeError& e) {
            parser_.fail(e.what());
        }
    }

    ExprPtr parse_primary() {
        const Token& token = parser_.peek();
        if (token.text == "(") {
            parser_.take();
            ExprPtr inner = parse();
            parser_.expect(")");
            return inner;
        }
        if (token.text == "{}") {
            parser_.take();
            return make_empty_seq();
        }
        if (token.text == "true" || token.text == "false") {
            return make_bool(parser_.take().text == "true");
        }
        if (std::isdigit(static_cast<unsigned char>(token.text[0]))) {
            return make_nat(std::stoull(parser_.take().text));
        }
        if (token.text == "head" || token.text == "tail") {
            bool is_head = parser_.take().text == "head";
            parser_.expect("(");
            ExprPtr inner = parse();
            parser_.expect(")");
            try {
                return make_unary(is_head ? ExprKind::head : ExprKind::tail, std::move(inner));
            } catch (const TypeError& e) {
                parser_.fail(e.what());
            }
        }
        if (token.text == "if") {
            parser_.take();
            ExprPtr cond = parse();
            parser_.expect("then");
            ExprPtr then_branch = parse();
            parser_.expect("else");
            ExprPtr else_branch = parse();
            try {
                return make_ite(std::move(cond), std::move(then_branch), std::move(else_branch));
            } catch (const TypeError& e) {
                parser_.fail(e.what());
            }
        }
        if (is_identifier(token.text)) {
            Token name = parser_.take();
            bool primed = false;
            if (parser_.peek_is("'")) {
                parser_.take();
                primed = true;
            }
            const auto& table = primed ? env_.primable : env_.vars;
            auto it = table.find(name.text);
            if (it == table.end()) {
                throw ParseError(name.line, name.column,
                                 (primed ? "primed variable not allowed here or unknown: "
                                         : "unknown variable: ") +
                                     name.text);
            }
            return make_var(name.text, primed, it->second);
        }
        parser_.fail("expected an expression");
    }

    Parser& parser_;
    const TypeEnv& env_;
};

BaseType parse_type(Parser& parser) {
    if (parser.peek_is("Bool")) {
        parser.take();
        return BaseType::boolean;
    }
    if (parser.peek_is("Nat")) {
        parser.take();
        return BaseType::natural;
    }
    if (parser.peek_is("Seq")) {
        parser.take();
        parser.expect("[");
        parser.expect("Nat");
        parser.expect("]");
        return BaseType::nat_seq;
    }
    parser.fail("expected a type (Bool, Nat or Seq[Nat])");
}

std::string parse_identifier(Parser& parser, const char* what) {
    const Token& token = parser.peek();
    if (!is_identifier(token.text)) {
        parser.fail(std::string("expected ") + what);
    }
    return parser.take().text;
}

}  // namespace

SpecAst parse_spec(const std::string& text) {
    Parser parser(tokenize(text));
    SpecAst spec;

    parser.expect("automaton");
    spec.name = parse_identifier(parser, "automaton name");

    parser.expect("states");
    while (true) {
        std::string name = parse_identifier(parser, "state variable name");
        parser.expect(":");
        BaseType type = parse_type(parser);
        for (const auto& [existing, t] : spec.state_vars) {
            if (existing == name) {
                parser.fail("duplicate state variable " + name);
            }
        }
        spec.state_vars.push_back({name, type});
        if (parser.peek_is(",")) {
            parser.take();
            continue;
        }
        break;
    }

    parser.expect("initial");
    parser.expect("condition");
    TypeEnv initial_env;
    for (const auto& [name, type] : spec.state_vars) {
        initial_env.vars.emplace(name, type);
    }
    spec.initial = ExprParser(parser, initial_env).parse();
    if (spec.initial->type != BaseType::boolean) {
        throw TypeError("initial condition must be Bool: " + print_expr(spec.initial));
    }

    parser.expect("actions");
    while (true) {
        std::string name = parse_identifier(parser, "action name");
        ActionDecl action;
        action.name = name;
        if (parser.peek_is("(")) {
            parser.take();
            while (true) {
                std::string param = parse_identifier(parser, "parameter name");
                parser.expect(":");
                BaseType type = parse_type(parser);
                action.params.push_back({param, type});
                if (parser.peek_is(",")) {
                    parser.take();
                    continue;
                }
                break;
            }
            parser.expect(")");
        }
        if (spec.find_action(name) != nullptr) {
            parser.fail("duplicate action " + name);
        }
        if (name == "tau" && !action.params.empty()) {
            parser.fail("tau takes no parameters");
        }
        for (const auto& [param, type] : action.params) {
            if (spec.var_type(param)) {
                parser.fail("parameter shadows state variable: " + param);
            }
        }
        spec.actions.push_back(std::move(action));
        if (parser.peek_is(",")) {
            parser.take();
            continue;
        }
        break;
    }
    if (spec.find_action("tau") == nullptr) {
        spec.actions.push_back(ActionDecl{"tau", {}});
    }

    parser.expect("transitions");
    while (!parser.at_end()) {
        parser.expect("action");
        Token name_token = parser.peek();
        std::string name = parse_identifier(parser, "action name");
        const ActionDecl* decl = spec.find_action(name);
        if (decl == nullptr) {
            throw ParseError(name_token.line, name_token.column,
                             "transition for undeclared action " + name);
        }
        if (parser.peek_is("(")) {
            parser.take();
            std::size_t index = 0;
            while (!parser.peek_is(")")) {
                std::string param = parse_identifier(parser, "parameter name");
                if (index >= decl->params.size() || decl->params[index].first != param) {
                    parser.fail("transition parameters must match the declaration of " + name);
                }
                ++index;
                if (parser.peek_is(",")) {
                    parser.take();
                }
            }
            parser.expect(")");
            if (index != decl->params.size()) {
                parser.fail("transition parameters must match the declaration of " + name);
            }
        } else if (!decl->params.empty()) {
            parser.fail("transition for " + name + " must list its parameters");
        }
        parser.expect("predicate");
        TypeEnv env;
        for (const auto& [var, type] : spec.state_vars) {
            env.vars.emplace(var, type);
            env.primable.emplace(var, type);
        }
        for (const auto& [param, type] : decl->params) {
            env.vars.emplace(param, type);
        }
        ExprPtr predicate = ExprParser(parser, env).parse();
        if (predicate->type != BaseType::boolean) {
            throw TypeError("transition predicate must be Bool: " + print_expr(predicate));
        }
        if (!spec.transitions.emplace(name, predicate).second) {
            throw ParseError(name_token.line, name_token.column,
                             "duplicate transition predicate for " + name);
        }
    }

    for (const auto& action : spec.actions) {
        if (!spec.transitions.count(action.name)) {
            throw TypeError("action " + action.name + " has no transition predicate" +
                            (action.name == "tau" ? " (declare action tau predicate false)" : ""));
        }
    }
    return spec;
}

std::string print_spec(const SpecAst& spec) {
    std::ostringstream out;
    out << "automaton " << spec.name << "\n";
    out << "  states\n";
    for (std::size_t i = 0; i < spec.state_vars.size(); ++i) {
        out << "    " << spec.state_vars[i].first << ": " << to_string(spec.state_vars[i].second)
            << (i + 1 < spec.state_vars.size() ? "," : "") << "\n";
    }
    out << "  initial condition\n    " << print_expr(spec.initial) << "\n";
    out << "  actions\n";
    for (std::size_t i = 0; i < spec.actions.size(); ++i) {
        const auto& action = spec.actions[i];
        out << "    " << action.name;
        if (!action.params.empty()) {
            out << "(";
            for (std::size_t k = 0; k < action.params.size(); ++k) {
                if (k > 0) {
                    out << ", ";
                }
                out << action.params[k].first << ": " << to_string(action.params[k].second);
            }
            out << ")";
        }
        out << (i + 1 < spec.actions.size() ? "," : "") << "\n";
    }
    out << "  transitions\n";
    for (const auto& action : spec.actions) {
        out << "    action " << action.name;
        if (!action.params.empty()) {
            out << "(";
            for (std::size_t k = 0; k < action.params.size(); ++k) {
                if (k > 0) {
                    out << ", ";
                }
                out << action.params[k].first;
            }
            out << ")";
        }
        out << "\n      predicate " << print_expr(spec.transitions.at(action.name)) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Explicit-state elaboration
// ---------------------------------------------------------------------------

namespace {

std::vector<Value> domain_of(BaseType type, const Bounds& bounds) {
    std::vector<Value> out;
    switch (type) {
        case BaseType::boolean:
            out.push_back(Value::of_bool(false));
            out.push_back(Value::of_bool(true));
            break;
        case BaseType::natural:
            for (std::uint64_t v = 0; v < bounds.nat_max; ++v) {
                out.push_back(Value::of_nat(v));
            }
            break;
        case BaseType::nat_seq: {
            std::vector<std::vector<std::uint64_t>> current{{}};
            out.push_back(Value::of_seq({}));
            for (std::uint64_t len = 1; len <= bounds.seq_max; ++len) {
                std::vector<std::vector<std::uint64_t>> next;
                for (const auto& seq : current) {
                    for (std::uint64_t v = 0; v < bounds.nat_max; ++v) {
                        auto extended = seq;
                        extended.push_back(v);
                        out.push_back(Value::of_seq(extended));
                        next.push_back(std::move(extended));
                    }
                }
                current = std::move(next);
            }
            break;
        }
    }
    return out;
}

}  // namespace

std::string state_id_of(const SpecAst& spec, const Valuation& valuation) {
    std::string out;
    for (const auto& [name, type] : spec.state_vars) {
        if (!out.empty()) {
            out += ";";
        }
        out += name + "=" + valuation.at({name, false}).str();
    }
    return out;
}

std::vector<Valuation> enumerate_valuations(const SpecAst& spec, const Bounds& bounds,
                                            std::size_t max_states) {
    std::vector<std::vector<Value>> domains;
    std::size_t count = 1;
    for (const auto& [name, type] : spec.state_vars) {
        domains.push_back(domain_of(type, bounds));
        if (count > max_states / domains.back().size() + 1) {
            throw BudgetError("state count exceeds the configured cap of " +
                              std::to_string(max_states));
        }
        count *= domains.back().size();
    }
    if (count > max_states) {
        throw BudgetError("state count " + std::to_string(count) +
                          " exceeds the configured cap of " + std::to_string(max_states));
    }
    std::vector<Valuation> out;
    std::vector<std::size_t> index(spec.state_vars.size(), 0);
    while (true) {
        Valuation valuation;
        for (std::size_t i = 0; i < spec.state_vars.size(); ++i) {
            valuation.emplace(std::make_pair(spec.state_vars[i].first, false),
                              domains[i][index[i]]);
        }
        out.push_back(std::move(valuation));
        std::size_t i = spec.state_vars.size();
        while (i > 0) {
            --i;
            if (++index[i] < domains[i].size()) {
                break;
            }
            index[i] = 0;
            if (i == 0) {
                return out;
            }
        }
        if (spec.state_vars.empty()) {
            return out;
        }
    }
}

Automaton elaborate_explicit(const SpecAst& spec, const Bounds& bounds, std::size_t max_states) {
    std::vector<Valuation> valuations = enumerate_valuations(spec, bounds, max_states);

    std::set<State> states;
    std::set<State> start;
    std::vector<std::pair<State, const Valuation*>> named;
    named.reserve(valuations.size());
    for (const auto& valuation : valuations) {
        State id = state_id_of(spec, valuation);
        states.insert(id);
        named.push_back({id, &valuation});
        auto initial = eval_expr(spec.initial, valuation);
        if (initial && initial->b) {
            start.insert(id);
        }
    }

    // Ground action instances over the parameter domains.
    std::set<ActionLabel> actions;
    std::vector<std::pair<ActionLabel, std::pair<const ActionDecl*, std::vector<Value>>>> instances;
    for (const auto& action : spec.actions) {
        if (action.name == "tau") {
            instances.push_back({ActionLabel::tau(), {&action, {}}});
            continue;
        }
        std::vector<std::vector<Value>> domains;
        for (const auto& [param, type] : action.params) {
            domains.push_back(domain_of(type, bounds));
        }
        std::vector<std::vector<Value>> tuples{{}};
        for (const auto& domain : domains) {
            std::vector<std::vector<Value>> next;
            for (const auto& tuple : tuples) {
                for (const auto& value : domain) {
                    auto extended = tuple;
                    extended.push_back(value);
                    next.push_back(std::move(extended));
                }
            }
            tuples = std::move(next);
        }
        for (auto& tuple : tuples) {
            std::vector<std::string> args;
            for (const auto& value : tuple) {
                args.push_back(value.str());
            }
            ActionLabel label = ActionLabel::external(action.name, std::move(args));
            actions.insert(label);
            instances.push_back({std::move(label), {&action, std::move(tuple)}});
        }
    }

    std::set<Step> steps;
    for (const auto& [src_id, src_val] : named) {
        for (const auto& [label, inst] : instances) {
            const auto& [decl, args] = inst;
            const ExprPtr& predicate = spec.transitions.at(decl->name);
            Valuation env = *src_val;
            for (std::size_t i = 0; i < decl->params.size(); ++i) {
                env.emplace(std::make_pair(decl->params[i].first, false), args[i]);
            }
            for (const auto& [dst_id, dst_val] : named) {
                Valuation full = env;
                for (const auto& [key, value] : *dst_val) {
                    full.emplace(std::make_pair(key.first, true), value);
                }
                auto result = eval_expr(predicate, full);
                if (result && result->b) {
                    steps.insert(Step{src_id, label, dst_id});
                }
            }
        }
    }
    return Automaton(std::move(states), std::move(start), std::move(actions), std::move(steps));
}

// ---------------------------------------------------------------------------
// Symbolic certificates
// ---------------------------------------------------------------------------

SymbolicCertificate parse_symbolic_certificate(const std::string& text, const SpecAst& lower,
                                               const SpecAst& upper) {
    // Split into entries introduced by "rho =", "theta =", "norm <action> =".
    struct Entry {
        std::string kind;
        std::string action;
        std::string body;
        std::size_t line;
    };
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find('%');
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first)) {
            continue;
        }
        if (first == "rho" || first == "theta" || first == "norm") {
            Entry entry;
            entry.kind = first;
            entry.line = line_no;
            std::string eq;
            if (first == "norm") {
                if (!(tokens >> entry.action)) {
                    throw ParseError(line_no, 1, "norm entry needs an action name");
                }
            }
            if (!(tokens >> eq) || eq != "=") {
                throw ParseError(line_no, 1, "expected '=' in certificate entry");
            }
            std::getline(tokens, entry.body);
            entries.push_back(std::move(entry));
        } else if (!entries.empty()) {
            entries.back().body += "\n" + line;
        } else {
            throw ParseError(line_no, 1, "certificate entries start with rho, theta or norm");
        }
    }

    TypeEnv rho_env;
    for (const auto& [name, type] : lower.state_vars) {
        rho_env.vars.emplace(name, type);
    }
    for (const auto& [name, type] : upper.state_vars) {
        if (rho_env.vars.count(name)) {
            throw TypeError("state variable " + name + " appears in both specifications");
        }
        rho_env.vars.emplace(name, type);
    }
    TypeEnv theta_env;
    for (const auto& [name, type] : lower.state_vars) {
        theta_env.vars.emplace(name, type);
    }

    SymbolicCertificate cert;
    cert.theta = make_bool(true);
    auto parse_body = [](const std::string& body, const TypeEnv& env) {
        Parser parser(tokenize(body));
        ExprPtr expr = ExprParser(parser, env).parse();
        if (!parser.at_end()) {
            parser.fail("trailing tokens after expression");
        }
        return expr;
    };
    for (const auto& entry : entries) {
        if (entry.kind == "rho") {
            cert.rho = parse_body(entry.body, rho_env);
            if (cert.rho->type != BaseType::boolean) {
                throw TypeError("rho must be Bool");
            }
        } else if (entry.kind == "theta") {
            cert.theta = parse_body(entry.body, theta_env);
            if (cert.theta->type != BaseType::boolean) {
                throw TypeError("theta must be Bool");
            }
        } else {
            const ActionDecl* decl = lower.find_action(entry.action);
            if (decl == nullptr) {
                throw ParseError(entry.line, 1, "norm entry for unknown action " + entry.action);
            }
            TypeEnv norm_env = rho_env;
            for (const auto& [name, type] : lower.state_vars) {
                norm_env.primable.emplace(name, type);
            }
            for (const auto& [param, type] : decl->params) {
                norm_env.vars.emplace(param, type);
            }
            ExprPtr norm = parse_body(entry.body, norm_env);
            if (norm->type != BaseType::natural) {
                throw TypeError("norm expressions must be Nat");
            }
            cert.norms[entry.action] = norm;
        }
    }
    if (!cert.rho) {
        throw CertificateError("symbolic certificate must define rho");
    }
    return cert;
}

// ---------------------------------------------------------------------------
// S-expression validation
// ---------------------------------------------------------------------------

bool validate_sexpr(const std::string& text, std::string* error) {
    auto fail = [&](std::size_t pos, const std::string& message) {
        if (error != nullptr) {
            *error = message + " at offset " + std::to_string(pos);
        }
        return false;
    };
    std::size_t depth = 0;
    std::size_t forms = 0;
    bool top_level_atom = false;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
        } else if (c == '(') {
            if (depth == 0) {
                ++forms;
            }
            ++depth;
            ++i;
        } else if (c == ')') {
            if (depth == 0) {
                return fail(i, "unbalanced ')'");
            }
            --depth;
            ++i;
        } else if (c == '|') {
            std::size_t j = text.find('|', i + 1);
            if (j == std::string::npos) {
                return fail(i, "unterminated quoted symbol");
            }
            if (depth == 0) {
                top_level_atom = true;
            }
            i = j + 1;
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '"') {
                ++j;
            }
            if (j == text.size()) {
                return fail(i, "unterminated string literal");
            }
            if (depth == 0) {
                top_level_atom = true;
            }
            i = j + 1;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else {
            if (depth == 0) {
                top_level_atom = true;
            }
            ++i;
        }
        if (top_level_atom) {
            return fail(i, "top-level atom outside any form");
        }
    }
    if (depth != 0) {
        return fail(text.size(), "unbalanced '('");
    }
    if (forms == 0) {
        return fail(0, "no forms");
    }
    return true;
}

}  // namespace normsim
