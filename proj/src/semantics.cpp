#include "crossgl/semantics.hpp"

#include <algorithm>

namespace crossgl {

// ---------------------------------------------------------------------------
// Builtin tables
// ---------------------------------------------------------------------------

const std::vector<BuiltinSignature>& builtin_signatures() {
    static const std::vector<BuiltinSignature> table = [] {
        std::vector<BuiltinSignature> t;
        const Type f = Type::float_();
        const Type i = Type::int_();
        for (int n = 2; n <= 4; ++n) {
            const Type v = Type::vec(n);
            t.push_back({"dot", {v, v}, f});
            t.push_back({"normalize", {v}, v});
            t.push_back({"length", {v}, f});
            t.push_back({"mix", {v, v, f}, v});
            t.push_back({"clamp", {v, f, f}, v});
        }
        t.push_back({"cross", {Type::vec(3), Type::vec(3)}, Type::vec(3)});
        t.push_back({"max", {f, f}, f});
        t.push_back({"max", {i, i}, i});
        t.push_back({"min", {f, f}, f});
        t.push_back({"min", {i, i}, i});
        t.push_back({"pow", {f, f}, f});
        t.push_back({"sqrt", {f}, f});
        t.push_back({"mix", {f, f, f}, f});
        t.push_back({"clamp", {f, f, f}, f});
        t.push_back({"abs", {f}, f});
        t.push_back({"abs", {i}, i});
        t.push_back({"floor", {f}, f});
        t.push_back({"sin", {f}, f});
        t.push_back({"cos", {f}, f});
        t.push_back({"texture", {Type::sampler2d(), Type::vec(2)}, Type::vec(4)});
        return t;
    }();
    return table;
}

const std::vector<std::string>& compute_builtin_names() {
    static const std::vector<std::string> names = {
        "thread_id_x", "thread_id_y", "thread_id_z",
        "block_id_x",  "block_id_y",  "block_id_z",
        "block_dim_x", "block_dim_y", "block_dim_z"};
    return names;
}

bool is_compute_builtin(const std::string& name) {
    const auto& names = compute_builtin_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

// ---------------------------------------------------------------------------
// unify_types
// ---------------------------------------------------------------------------

namespace {

bool is_arith(const std::string& op) {
    return op == "+" || op == "-" || op == "*" || op == "/";
}

bool is_equality(const std::string& op) { return op == "==" || op == "!="; }

bool is_relational(const std::string& op) {
    return op == "<" || op == "<=" || op == ">" || op == ">=";
}

[[noreturn]] void no_rule(const Type& l, const Type& r, const std::string& op) {
    throw TypeError({}, "no type rule for " + type_to_string(l) + " " + op + " " +
                            type_to_string(r));
}

} // namespace

Type unify_types(const Type& left, const Type& right, const std::string& op) {
    if (is_arith(op)) {
        if (left.is_numeric_scalar() && right.is_numeric_scalar()) {
            if (left.is_int() && right.is_int()) return Type::int_();
            return Type::float_();
        }
        if (left.is_vector() && right.is_vector() && left.dim == right.dim) return left;
        if (left.is_vector() && right.is_numeric_scalar()) return left;
        if (left.is_numeric_scalar() && right.is_vector()) return right;
        if (op == "*") {
            if (left.is_matrix() && right.is_matrix() && left.dim == right.dim) return left;
            if (left.is_matrix() && right.is_vector() && left.dim == right.dim) return right;
            // Row-vector convention for vec * mat.
            if (left.is_vector() && right.is_matrix() && left.dim == right.dim) return left;
            if (left.is_matrix() && right.is_numeric_scalar()) return left;
            if (left.is_numeric_scalar() && right.is_matrix()) return right;
        }
        no_rule(left, right, op);
    }
    if (op == "%") {
        if (left.is_int() && right.is_int()) return Type::int_();
        no_rule(left, right, op);
    }
    if (is_equality(op)) {
        Type l = left.is_int() && right.is_float() ? Type::float_() : left;
        Type r = right.is_int() && left.is_float() ? Type::float_() : right;
        bool comparable = l.is_scalar() || l.is_vector();
        if (comparable && !l.is_void() && l == r) return Type::bool_();
        no_rule(left, right, op);
    }
    if (is_relational(op)) {
        if (left.is_numeric_scalar() && right.is_numeric_scalar()) return Type::bool_();
        no_rule(left, right, op);
    }
    if (op == "&&" || op == "||") {
        if (left.is_bool() && right.is_bool()) return Type::bool_();
        no_rule(left, right, op);
    }
    no_rule(left, right, op);
}

// ---------------------------------------------------------------------------
// resolve_swizzle / check_constructor
// ---------------------------------------------------------------------------

Type resolve_swizzle(const Type& base, const std::string& components,
                     const SourceLocation& loc, bool as_write) {
    if (!base.is_vector())
        throw TypeError(loc, "swizzle on non-vector type " + type_to_string(base));
    if (components.empty() || components.size() > 4)
        throw TypeError(loc, "swizzle length must be 1..4, got " + components);
    bool used[4] = {false, false, false, false};
    for (char c : components) {
        int idx;
        switch (c) {
        case 'x': idx = 0; break;
        case 'y': idx = 1; break;
        case 'z': idx = 2; break;
        case 'w': idx = 3; break;
        default: throw TypeError(loc, std::string("invalid swizzle component '") + c + "'");
        }
        if (idx >= base.dim)
            throw TypeError(loc, std::string("swizzle component '") + c + "' exceeds " +
                                     type_to_string(base));
        if (as_write && used[idx])
            throw TypeError(loc, std::string("swizzle write repeats component '") + c + "'");
        used[idx] = true;
    }
    if (components.size() == 1) return Type::float_();
    return Type::vec(static_cast<int>(components.size()));
}

Type check_constructor(const Type& type, const std::vector<Type>& arg_types,
                       const SourceLocation& loc) {
    if (type.is_vector()) {
        if (arg_types.size() == 1 && arg_types[0].is_numeric_scalar()) return type; // splat
        int count = 0;
        for (const Type& a : arg_types) {
            if (a.is_numeric_scalar())
                count += 1;
            else if (a.is_vector())
                count += a.dim;
            else
                throw TypeError(loc, "invalid " + type_to_string(type) +
                                         " constructor argument " + type_to_string(a));
        }
        if (count != type.dim)
            throw TypeError(loc, type_to_string(type) + " constructor needs " +
                                     std::to_string(type.dim) + " components, got " +
                                     std::to_string(count));
        return type;
    }
    if (type.is_matrix()) {
        if (arg_types.size() != static_cast<size_t>(type.dim))
            throw TypeError(loc, type_to_string(type) + " constructor needs " +
                                     std::to_string(type.dim) + " column vectors");
        for (const Type& a : arg_types)
            if (!(a.is_vector() && a.dim == type.dim))
                throw TypeError(loc, type_to_string(type) + " constructor column must be vec" +
                                         std::to_string(type.dim) + ", got " +
                                         type_to_string(a));
        return type;
    }
    if (type.is_int() || type.is_float()) {
        if (arg_types.size() != 1 || !arg_types[0].is_numeric_scalar())
            throw TypeError(loc, type_to_string(type) +
                                     " constructor takes one numeric scalar argument");
        return type;
    }
    throw TypeError(loc, "type " + type_to_string(type) + " has no constructor");
}

// ---------------------------------------------------------------------------
// typecheck_module
// ---------------------------------------------------------------------------

namespace {

struct Checker {
    ShaderModule& module;
    std::vector<Diagnostic> diags;
    SymbolTable symbols;
    const FunctionDecl* current_fn = nullptr;
    int loop_depth = 0;

    void error(const SourceLocation& loc, const std::string& msg) {
        diags.push_back({loc, Severity::Error, msg});
    }

    // `=` compatibility: exact type, or int narrowing into float.
    static bool assignable(const Type& target, const Type& value) {
        if (target == value) return true;
        if (target.is_float() && value.is_int()) return true;
        return false;
    }

    static bool arg_matches(const Type& param, const Type& arg) {
        if (assignable(param, arg)) return true;
        // Unsized array parameters accept any array of the same element type.
        if (param.is_array() && !param.array_size && arg.is_array() &&
            *param.element == *arg.element)
            return true;
        return false;
    }

    std::optional<Type> check_call(Expr& e) {
        std::vector<Type> arg_types;
        bool poisoned = false;
        for (auto& a : e.args) {
            auto t = check_expr(*a);
            if (!t)
                poisoned = true;
            else
                arg_types.push_back(*t);
        }
        if (poisoned) return std::nullopt;

        if (const FunctionDecl* fn = module.find_function(e.text)) {
            if (fn->params.size() != arg_types.size()) {
                error(e.loc, "call to " + e.text + " expects " +
                                 std::to_string(fn->params.size()) + " arguments, got " +
                                 std::to_string(arg_types.size()));
                return std::nullopt;
            }
            for (size_t i = 0; i < arg_types.size(); ++i) {
                if (!arg_matches(fn->params[i].type, arg_types[i])) {
                    error(e.args[i]->loc, "argument " + std::to_string(i + 1) + " of " + e.text +
                                              ": cannot pass " + type_to_string(arg_types[i]) +
                                              " as " + type_to_string(fn->params[i].type));
                    return std::nullopt;
                }
            }
            return fn->return_type;
        }

        bool name_found = false;
        for (const auto& sig : builtin_signatures()) {
            if (sig.name != e.text) continue;
            name_found = true;
            if (sig.params.size() != arg_types.size()) continue;
            bool ok = true;
            for (size_t i = 0; i < arg_types.size(); ++i)
                if (!assignable(sig.params[i], arg_types[i])) {
                    ok = false;
                    break;
                }
            if (ok) return sig.result;
        }
        if (name_found) {
            std::string got;
            for (size_t i = 0; i < arg_types.size(); ++i)
                got += (i ? ", " : "") + type_to_string(arg_types[i]);
            error(e.loc, "no overload of " + e.text + " matches (" + got + ")");
            return std::nullopt;
        }
        error(e.loc, "call to undeclared function " + e.text);
        return std::nullopt;
    }

    std::optional<Type> check_member_or_swizzle(Expr& e, bool as_write) {
        auto base = check_expr(*e.args[0], as_write);
        if (!base) return std::nullopt;
        if (base->is_named()) {
            const StructDecl* s = module.find_struct(base->name);
            if (!s) {
                error(e.loc, "unresolved type " + base->name);
                return std::nullopt;
            }
            const StructMember* m = s->find_member(e.text);
            if (!m) {
                error(e.loc, "struct " + base->name + " has no member " + e.text);
                return std::nullopt;
            }
            e.kind = ExprKind::MemberAccess;
            return m->type;
        }
        if (base->is_vector()) {
            try {
                Type t = resolve_swizzle(*base, e.text, e.loc, as_write);
                e.kind = ExprKind::Swizzle;
                return t;
            } catch (const TypeError& err) {
                error(e.loc, err.message());
                return std::nullopt;
            }
        }
        error(e.loc, "member access on " + type_to_string(*base));
        return std::nullopt;
    }

    std::optional<Type> check_expr(Expr& e, bool as_write = false) {
        std::optional<Type> result = check_expr_impl(e, as_write);
        if (result) e.type = *result;
        return result;
    }

    std::optional<Type> check_expr_impl(Expr& e, bool as_write) {
        switch (e.kind) {
        case ExprKind::IntLit: return Type::int_();
        case ExprKind::FloatLit: return Type::float_();
        case ExprKind::BoolLit: return Type::bool_();
        case ExprKind::VarRef: {
            const Symbol* sym = symbols.lookup(e.text);
            if (!sym) {
                error(e.loc, "undeclared identifier " + e.text);
                return std::nullopt;
            }
            if (sym->kind == SymbolKind::Function || sym->kind == SymbolKind::Struct) {
                error(e.loc, e.text + " is not a value");
                return std::nullopt;
            }
            if (as_write) {
                if (sym->kind == SymbolKind::Builtin) {
                    error(e.loc, "cannot assign to builtin " + e.text);
                    return std::nullopt;
                }
                if (sym->kind == SymbolKind::Global) {
                    const GlobalDecl* g = module.find_global(e.text);
                    if (g && g->qualifier != GlobalQualifier::Plain) {
                        error(e.loc, "cannot assign to " +
                                         std::string(g->qualifier == GlobalQualifier::Const
                                                         ? "const"
                                                         : "uniform") +
                                         " global " + e.text);
                        return std::nullopt;
                    }
                }
            }
            return sym->type;
        }
        case ExprKind::Binary: {
            auto l = check_expr(*e.args[0]);
            auto r = check_expr(*e.args[1]);
            if (!l || !r) return std::nullopt;
            try {
                return unify_types(*l, *r, e.text);
            } catch (const TypeError& err) {
                error(e.loc, err.message());
                return std::nullopt;
            }
        }
        case ExprKind::Unary: {
            auto t = check_expr(*e.args[0]);
            if (!t) return std::nullopt;
            if (e.text == "-") {
                if (t->is_numeric_scalar() || t->is_vector() || t->is_matrix()) return t;
                error(e.loc, "unary - on " + type_to_string(*t));
                return std::nullopt;
            }
            if (t->is_bool()) return t;
            error(e.loc, "unary ! on " + type_to_string(*t));
            return std::nullopt;
        }
        case ExprKind::Call: return check_call(e);
        case ExprKind::Construct: {
            std::vector<Type> arg_types;
            bool poisoned = false;
            for (auto& a : e.args) {
                auto t = check_expr(*a);
                if (!t)
                    poisoned = true;
                else
                    arg_types.push_back(*t);
            }
            if (poisoned) return std::nullopt;
            try {
                return check_constructor(e.ctor_type, arg_types, e.loc);
            } catch (const TypeError& err) {
                error(e.loc, err.message());
                return std::nullopt;
            }
        }
        case ExprKind::MemberAccess:
        case ExprKind::Swizzle:
        case ExprKind::MemberOrSwizzle: return check_member_or_swizzle(e, as_write);
        case ExprKind::Index: {
            auto base = check_expr(*e.args[0], as_write);
            auto idx = check_expr(*e.args[1]);
            if (!base || !idx) return std::nullopt;
            if (!idx->is_int()) {
                error(e.args[1]->loc, "array index must be int, got " + type_to_string(*idx));
                return std::nullopt;
            }
            if (!base->is_array()) {
                error(e.loc, "indexing non-array type " + type_to_string(*base));
                return std::nullopt;
            }
            return *base->element;
        }
        case ExprKind::Ternary: {
            auto c = check_expr(*e.args[0]);
            auto t = check_expr(*e.args[1]);
            auto f = check_expr(*e.args[2]);
            if (!c || !t || !f) return std::nullopt;
            if (!c->is_bool()) {
                error(e.args[0]->loc,
                      "ternary condition must be bool, got " + type_to_string(*c));
                return std::nullopt;
            }
            if (*t == *f) return t;
            if (t->is_float() && f->is_int()) return t;
            if (t->is_int() && f->is_float()) return f;
            error(e.loc, "ternary branches disagree: " + type_to_string(*t) + " vs " +
                             type_to_string(*f));
            return std::nullopt;
        }
        }
        return std::nullopt;
    }

    void check_assign(Stmt& s) {
        auto target = check_expr(*s.lvalue, /*as_write=*/true);
        auto value = check_expr(*s.expr);
        if (!target || !value) return;
        if (s.text == "=") {
            if (!assignable(*target, *value))
                error(s.loc, "cannot assign " + type_to_string(*value) + " to " +
                                 type_to_string(*target));
            return;
        }
        // Compound assignment: `a op= b` behaves as `a = a op b`.
        std::string op(1, s.text[0]);
        try {
            Type combined = unify_types(*target, *value, op);
            if (!assignable(*target, combined))
                error(s.loc, "cannot assign " + type_to_string(combined) + " to " +
                                 type_to_string(*target));
        } catch (const TypeError& err) {
            error(s.loc, err.message());
        }
    }

    void check_stmt(Stmt& s) {
        switch (s.kind) {
        case StmtKind::VarDecl: {
            if (s.decl_type->is_void()) {
                error(s.loc, "variable " + s.text + " has type void");
                break;
            }
            if (s.expr) {
                auto init = check_expr(*s.expr);
                if (init && !assignable(*s.decl_type, *init))
                    error(s.loc, "cannot assign " + type_to_string(*init) + " to " +
                                     type_to_string(*s.decl_type));
            }
            if (!symbols.declare(s.text, {*s.decl_type, SymbolKind::Local}))
                error(s.loc, "redeclaration of " + s.text);
            break;
        }
        case StmtKind::Assign: check_assign(s); break;
        case StmtKind::If: {
            auto c = check_expr(*s.expr);
            if (c && !c->is_bool())
                error(s.expr->loc, "if condition must be bool, got " + type_to_string(*c));
            symbols.push();
            for (auto& b : s.body) check_stmt(*b);
            symbols.pop();
            symbols.push();
            for (auto& b : s.else_body) check_stmt(*b);
            symbols.pop();
            break;
        }
        case StmtKind::For: {
            symbols.push();
            if (s.init) check_stmt(*s.init);
            if (s.expr) {
                auto c = check_expr(*s.expr);
                if (c && !c->is_bool())
                    error(s.expr->loc,
                          "for condition must be bool, got " + type_to_string(*c));
            }
            if (s.step) check_stmt(*s.step);
            ++loop_depth;
            symbols.push();
            for (auto& b : s.body) check_stmt(*b);
            symbols.pop();
            --loop_depth;
            symbols.pop();
            break;
        }
        case StmtKind::While: {
            auto c = check_expr(*s.expr);
            if (c && !c->is_bool())
                error(s.expr->loc, "while condition must be bool, got " + type_to_string(*c));
            ++loop_depth;
            symbols.push();
            for (auto& b : s.body) check_stmt(*b);
            symbols.pop();
            --loop_depth;
            break;
        }
        case StmtKind::Return: {
            const Type& expected = current_fn->return_type;
            if (!s.expr) {
                if (!expected.is_void()) error(s.loc, "missing return value");
                break;
            }
            if (expected.is_void()) {
                error(s.loc, "return value in void function");
                break;
            }
            auto t = check_expr(*s.expr);
            if (t && !assignable(expected, *t))
                error(s.loc, "cannot return " + type_to_string(*t) +
                                 " from function returning " + type_to_string(expected));
            break;
        }
        case StmtKind::Break:
        case StmtKind::Continue:
            if (loop_depth == 0)
                error(s.loc, std::string(s.kind == StmtKind::Break ? "break" : "continue") +
                                 " outside of a loop");
            break;
        case StmtKind::ExprStmt: check_expr(*s.expr); break;
        case StmtKind::Block:
            symbols.push();
            for (auto& b : s.body) check_stmt(*b);
            symbols.pop();
            break;
        }
    }

    static bool stmt_returns(const Stmt& s) {
        switch (s.kind) {
        case StmtKind::Return: return true;
        case StmtKind::If:
            return !s.else_body.empty() && list_returns(s.body) && list_returns(s.else_body);
        case StmtKind::Block: return list_returns(s.body);
        default: return false;
        }
    }

    static bool list_returns(const std::vector<StmtPtr>& body) {
        for (const auto& s : body)
            if (stmt_returns(*s)) return true;
        return false;
    }

    // Compute parameters must be bindable from global memory: scalars,
    // vectors, matrices, or arrays of those (including arrays of records).
    static bool compute_param_ok(const Type& t) {
        switch (t.kind) {
        case Type::Kind::Scalar: return !t.is_void();
        case Type::Kind::Vector:
        case Type::Kind::Matrix: return true;
        case Type::Kind::Array:
            return t.element->kind != Type::Kind::Sampler2D &&
                   t.element->kind != Type::Kind::Array;
        default: return false;
        }
    }

    void check_entry_signature(const FunctionDecl& f) {
        if (f.stage == Stage::Compute) {
            if (!f.return_type.is_void())
                error(f.loc, "compute function " + f.name + " must return void");
            for (const auto& p : f.params)
                if (!compute_param_ok(p.type))
                    error(p.loc, "compute parameter " + p.name + " has non-bindable type " +
                                     type_to_string(p.type));
            return;
        }
        if (!f.is_entry_point()) return;
        if (f.stage == Stage::Vertex) {
            if (f.params.size() != 1 || !f.params[0].type.is_named())
                error(f.loc, "vertex entry point takes exactly one record parameter");
            if (!f.return_type.is_named())
                error(f.loc, "vertex entry point must return a record");
        } else if (f.stage == Stage::Fragment) {
            if (f.params.size() != 1 ||
                !(f.params[0].type.is_named() || f.params[0].type.is_vector()))
                error(f.loc, "fragment entry point takes one record or vector parameter");
            if (!(f.return_type == Type::vec(4) || f.return_type.is_named()))
                error(f.loc, "fragment entry point must return vec4 or a record");
        }
    }

    void check_function(FunctionDecl& f) {
        current_fn = &f;
        check_entry_signature(f);
        symbols.push();
        if (f.stage == Stage::Compute)
            for (const auto& name : compute_builtin_names())
                symbols.declare(name, {Type::int_(), SymbolKind::Builtin});
        for (const auto& p : f.params) symbols.declare(p.name, {p.type, SymbolKind::Param});
        for (auto& s : f.body) check_stmt(*s);
        if (!f.return_type.is_void() && !list_returns(f.body))
            error(f.loc, "function " + f.name + ": not every path returns " +
                             type_to_string(f.return_type));
        symbols.pop();
        current_fn = nullptr;
    }

    std::vector<Diagnostic> run() {
        for (const auto& s : module.structs)
            symbols.declare(s.name, {Type::named(s.name), SymbolKind::Struct});
        for (const auto& f : module.functions)
            symbols.declare(f.name, {f.return_type, SymbolKind::Function});
        for (auto& g : module.globals) {
            if (g.init) {
                if (g.qualifier != GlobalQualifier::Const)
                    error(g.loc, "only const globals may have initializers");
                auto t = check_expr(*g.init);
                if (t && !assignable(g.type, *t))
                    error(g.loc, "cannot initialize " + type_to_string(g.type) + " with " +
                                     type_to_string(*t));
            } else if (g.qualifier == GlobalQualifier::Const) {
                error(g.loc, "const global " + g.name + " needs an initializer");
            }
            symbols.declare(g.name, {g.type, SymbolKind::Global});
        }
        for (auto& f : module.functions) check_function(f);
        std::stable_sort(diags.begin(), diags.end(),
                         [](const Diagnostic& a, const Diagnostic& b) { return a.loc < b.loc; });
        return std::move(diags);
    }
};

} // namespace

std::vector<Diagnostic> typecheck_module(ShaderModule& module) {
    Checker checker{module, {}, {}};
    return checker.run();
}

} // namespace crossgl
