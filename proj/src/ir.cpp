#include "crossgl/ir.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace crossgl {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

bool operator==(const Type& a, const Type& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Type::Kind::Scalar: return a.scalar == b.scalar;
    case Type::Kind::Vector:
    case Type::Kind::Matrix: return a.dim == b.dim;
    case Type::Kind::Array:
        if (a.array_size != b.array_size) return false;
        return *a.element == *b.element;
    case Type::Kind::Named: return a.name == b.name;
    case Type::Kind::Sampler2D: return true;
    }
    return false;
}

std::string type_to_string(const Type& t) {
    switch (t.kind) {
    case Type::Kind::Scalar:
        switch (t.scalar) {
        case ScalarKind::Int: return "int";
        case ScalarKind::Float: return "float";
        case ScalarKind::Bool: return "bool";
        case ScalarKind::Void: return "void";
        }
        return "?";
    case Type::Kind::Vector: return "vec" + std::to_string(t.dim);
    case Type::Kind::Matrix: return "mat" + std::to_string(t.dim);
    case Type::Kind::Array: {
        std::string s = type_to_string(*t.element);
        s += "[";
        if (t.array_size) s += std::to_string(*t.array_size);
        s += "]";
        return s;
    }
    case Type::Kind::Named: return t.name;
    case Type::Kind::Sampler2D: return "sampler2D";
    }
    return "?";
}

std::string format_float(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    std::string s(buf, end);
    if (s.find('.') != std::string::npos) return s;
    size_t e = s.find_first_of("eE");
    if (e == std::string::npos) return s + ".0";
    return s.substr(0, e) + ".0" + s.substr(e);
}

const char* stage_name(Stage s) {
    switch (s) {
    case Stage::None: return "none";
    case Stage::Vertex: return "vertex";
    case Stage::Fragment: return "fragment";
    case Stage::Compute: return "compute";
    }
    return "?";
}

const Attribute* find_attribute(const std::vector<Attribute>& attrs, const std::string& name) {
    for (const auto& a : attrs)
        if (a.name == name) return &a;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Expr / Stmt construction and cloning
// ---------------------------------------------------------------------------

ExprPtr Expr::clone() const {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->loc = loc;
    e->type = type;
    e->int_value = int_value;
    e->float_value = float_value;
    e->bool_value = bool_value;
    e->text = text;
    e->ctor_type = ctor_type;
    e->args.reserve(args.size());
    for (const auto& a : args) e->args.push_back(a->clone());
    return e;
}

ExprPtr Expr::int_lit(long long v, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::IntLit;
    e->int_value = v;
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::float_lit(double v, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::FloatLit;
    e->float_value = v;
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::bool_lit(bool v, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::BoolLit;
    e->bool_value = v;
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::var_ref(std::string name, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::VarRef;
    e->text = std::move(name);
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::binary(std::string op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->text = std::move(op);
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::unary(std::string op, ExprPtr operand, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Unary;
    e->text = std::move(op);
    e->args.push_back(std::move(operand));
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::call(std::string callee, std::vector<ExprPtr> args, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Call;
    e->text = std::move(callee);
    e->args = std::move(args);
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::construct(Type type, std::vector<ExprPtr> args, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Construct;
    e->ctor_type = std::move(type);
    e->args = std::move(args);
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::member(ExprPtr base, std::string name, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::MemberOrSwizzle;
    e->text = std::move(name);
    e->args.push_back(std::move(base));
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::index(ExprPtr base, ExprPtr idx, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Index;
    e->args.push_back(std::move(base));
    e->args.push_back(std::move(idx));
    e->loc = std::move(loc);
    return e;
}

ExprPtr Expr::ternary(ExprPtr cond, ExprPtr t, ExprPtr f, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Ternary;
    e->args.push_back(std::move(cond));
    e->args.push_back(std::move(t));
    e->args.push_back(std::move(f));
    e->loc = std::move(loc);
    return e;
}

StmtPtr Stmt::clone() const {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->loc = loc;
    s->text = text;
    s->decl_type = decl_type;
    if (lvalue) s->lvalue = lvalue->clone();
    if (expr) s->expr = expr->clone();
    if (init) s->init = init->clone();
    if (step) s->step = step->clone();
    for (const auto& b : body) s->body.push_back(b->clone());
    for (const auto& b : else_body) s->else_body.push_back(b->clone());
    return s;
}

StmtPtr Stmt::var_decl(std::string name, Type type, ExprPtr init, SourceLocation loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::VarDecl;
    s->text = std::move(name);
    s->decl_type = std::move(type);
    s->expr = std::move(init);
    s->loc = std::move(loc);
    return s;
}

StmtPtr Stmt::assign(ExprPtr lvalue, std::string op, ExprPtr value, SourceLocation loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Assign;
    s->lvalue = std::move(lvalue);
    s->text = std::move(op);
    s->expr = std::move(value);
    s->loc = std::move(loc);
    return s;
}

StmtPtr Stmt::ret(ExprPtr value, SourceLocation loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Return;
    s->expr = std::move(value);
    s->loc = std::move(loc);
    return s;
}

StmtPtr Stmt::expr_stmt(ExprPtr e, SourceLocation loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::ExprStmt;
    s->expr = std::move(e);
    s->loc = std::move(loc);
    return s;
}

FunctionDecl FunctionDecl::clone() const {
    FunctionDecl f;
    f.name = name;
    f.params = params;
    f.return_type = return_type;
    for (const auto& s : body) f.body.push_back(s->clone());
    f.stage = stage;
    f.attributes = attributes;
    f.loc = loc;
    return f;
}

GlobalDecl GlobalDecl::clone() const {
    GlobalDecl g;
    g.name = name;
    g.type = type;
    g.qualifier = qualifier;
    if (init) g.init = init->clone();
    g.attributes = attributes;
    g.loc = loc;
    return g;
}

ShaderModule ShaderModule::clone() const {
    ShaderModule m;
    m.name = name;
    m.structs = structs;
    for (const auto& g : globals) m.globals.push_back(g.clone());
    for (const auto& f : functions) m.functions.push_back(f.clone());
    return m;
}

const StructMember* StructDecl::find_member(const std::string& member_name) const {
    for (const auto& m : members)
        if (m.name == member_name) return &m;
    return nullptr;
}

const StructDecl* ShaderModule::find_struct(const std::string& struct_name) const {
    for (const auto& s : structs)
        if (s.name == struct_name) return &s;
    return nullptr;
}

const FunctionDecl* ShaderModule::find_function(const std::string& fn_name) const {
    for (const auto& f : functions)
        if (f.name == fn_name) return &f;
    return nullptr;
}

const GlobalDecl* ShaderModule::find_global(const std::string& global_name) const {
    for (const auto& g : globals)
        if (g.name == global_name) return &g;
    return nullptr;
}

// ---------------------------------------------------------------------------
// validate_program
// ---------------------------------------------------------------------------

namespace {

void check_type_resolved(const Type& t, const SourceLocation& loc, const ShaderModule& module,
                         std::vector<Diagnostic>& out) {
    switch (t.kind) {
    case Type::Kind::Named:
        if (!module.find_struct(t.name))
            out.push_back({loc, Severity::Error, "unresolved type " + t.name});
        break;
    case Type::Kind::Array:
        if (t.array_size && *t.array_size < 1)
            out.push_back({loc, Severity::Error,
                           "array size must be >= 1, got " + std::to_string(*t.array_size)});
        check_type_resolved(*t.element, loc, module, out);
        break;
    default: break;
    }
}

// Detects direct or indirect struct self-containment (through members and arrays).
bool struct_reaches(const ShaderModule& module, const Type& t, const std::string& target,
                    std::set<std::string>& visiting) {
    if (t.kind == Type::Kind::Array) return struct_reaches(module, *t.element, target, visiting);
    if (t.kind != Type::Kind::Named) return false;
    if (t.name == target) return true;
    if (!visiting.insert(t.name).second) return false; // already on this path
    const StructDecl* s = module.find_struct(t.name);
    if (!s) return false;
    for (const auto& m : s->members)
        if (struct_reaches(module, m.type, target, visiting)) return true;
    visiting.erase(t.name);
    return false;
}

void walk_stmt_types(const Stmt& s, const ShaderModule& module, std::vector<Diagnostic>& out) {
    if (s.kind == StmtKind::VarDecl && s.decl_type)
        check_type_resolved(*s.decl_type, s.loc, module, out);
    if (s.init) walk_stmt_types(*s.init, module, out);
    if (s.step) walk_stmt_types(*s.step, module, out);
    for (const auto& b : s.body) walk_stmt_types(*b, module, out);
    for (const auto& b : s.else_body) walk_stmt_types(*b, module, out);
}

} // namespace

std::vector<Diagnostic> validate_program(const ShaderModule& module) {
    std::vector<Diagnostic> out;

    // Top-level name uniqueness across structs, globals, and functions.
    std::unordered_map<std::string, SourceLocation> seen;
    auto check_unique = [&](const std::string& name, const SourceLocation& loc,
                            const char* what) {
        auto [it, inserted] = seen.emplace(name, loc);
        if (!inserted)
            out.push_back({loc, Severity::Error,
                           std::string("duplicate top-level name ") + name + " (" + what + ")"});
    };

    for (const auto& s : module.structs) {
        check_unique(s.name, s.loc, "struct");
        std::unordered_set<std::string> member_names;
        for (const auto& m : s.members) {
            if (!member_names.insert(m.name).second)
                out.push_back({m.loc, Severity::Error,
                               "duplicate member " + m.name + " in struct " + s.name});
            if (m.type.is_void())
                out.push_back({m.loc, Severity::Error,
                               "struct member " + m.name + " has type void"});
            check_type_resolved(m.type, m.loc, module, out);
            std::set<std::string> visiting{s.name};
            if (struct_reaches(module, m.type, s.name, visiting))
                out.push_back({m.loc, Severity::Error, "recursive struct " + s.name});
        }
    }

    for (const auto& g : module.globals) {
        check_unique(g.name, g.loc, "global");
        check_type_resolved(g.type, g.loc, module, out);
        if (g.type.is_void())
            out.push_back({g.loc, Severity::Error, "global " + g.name + " has type void"});
    }

    int entries_per_stage[4] = {0, 0, 0, 0};
    for (const auto& f : module.functions) {
        // Entry points live one per stage, so `main` is keyed by its stage.
        std::string key = f.is_entry_point()
                              ? f.name + "@" + stage_name(f.stage)
                              : f.name;
        check_unique(key, f.loc, "function");
        std::unordered_set<std::string> param_names;
        for (const auto& p : f.params) {
            if (!param_names.insert(p.name).second)
                out.push_back({p.loc, Severity::Error,
                               "duplicate parameter " + p.name + " in function " + f.name});
            check_type_resolved(p.type, p.loc, module, out);
        }
        check_type_resolved(f.return_type, f.loc, module, out);
        for (const auto& s : f.body) walk_stmt_types(*s, module, out);
        if (f.is_entry_point()) {
            int idx = static_cast<int>(f.stage);
            if (++entries_per_stage[idx] == 2)
                out.push_back({f.loc, Severity::Error,
                               std::string("multiple entry points for stage ") +
                                   stage_name(f.stage)});
        }
    }

    std::stable_sort(out.begin(), out.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.loc < b.loc; });
    return out;
}

// ---------------------------------------------------------------------------
// ast_equal
// ---------------------------------------------------------------------------

namespace {

bool expr_equal(const Expr& a, const Expr& b);
bool stmt_equal(const Stmt& a, const Stmt& b);

// Member access and swizzle compare by spelling; specialization into one or
// the other happens during typechecking and carries no structural content.
ExprKind normalized_kind(ExprKind k) {
    if (k == ExprKind::MemberAccess || k == ExprKind::Swizzle) return ExprKind::MemberOrSwizzle;
    return k;
}

// Negating a literal and a negative literal are the same structure; the
// printer and parser are free to pick either spelling.
const Expr* strip_literal_negation(const Expr& e, long long& ivalue, double& fvalue,
                                   bool& negated) {
    const Expr* cur = &e;
    bool neg = false;
    while (cur->kind == ExprKind::Unary && cur->text == "-") {
        neg = !neg;
        cur = cur->args[0].get();
    }
    if (cur->kind != ExprKind::IntLit && cur->kind != ExprKind::FloatLit) {
        ivalue = 0;
        fvalue = 0.0;
        negated = false;
        return &e; // not a negated-literal chain
    }
    negated = neg;
    ivalue = neg ? -cur->int_value : cur->int_value;
    fvalue = neg ? -cur->float_value : cur->float_value;
    return cur;
}

bool expr_equal(const Expr& a, const Expr& b) {
    {
        long long ai, bi;
        double af, bf;
        bool aneg, bneg;
        const Expr* pa = strip_literal_negation(a, ai, af, aneg);
        const Expr* pb = strip_literal_negation(b, bi, bf, bneg);
        if (pa->kind == ExprKind::IntLit || pb->kind == ExprKind::IntLit ||
            pa->kind == ExprKind::FloatLit || pb->kind == ExprKind::FloatLit) {
            if (pa->kind != pb->kind) return false;
            return pa->kind == ExprKind::IntLit ? ai == bi : af == bf;
        }
    }
    if (normalized_kind(a.kind) != normalized_kind(b.kind)) return false;
    switch (a.kind) {
    case ExprKind::IntLit:
        if (a.int_value != b.int_value) return false;
        break;
    case ExprKind::FloatLit:
        if (a.float_value != b.float_value) return false;
        break;
    case ExprKind::BoolLit:
        if (a.bool_value != b.bool_value) return false;
        break;
    case ExprKind::Construct:
        if (a.ctor_type != b.ctor_type) return false;
        break;
    default:
        if (a.text != b.text) return false;
        break;
    }
    if (a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

// A Block wrapping exactly one statement is structurally that statement.
const Stmt& unwrap_block(const Stmt& s) {
    if (s.kind == StmtKind::Block && s.body.size() == 1) return unwrap_block(*s.body[0]);
    return s;
}

bool stmt_list_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!stmt_equal(*a[i], *b[i])) return false;
    return true;
}

bool opt_expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return expr_equal(*a, *b);
}

bool opt_stmt_equal(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    return stmt_equal(*a, *b);
}

bool stmt_equal(const Stmt& a_raw, const Stmt& b_raw) {
    const Stmt& a = unwrap_block(a_raw);
    const Stmt& b = unwrap_block(b_raw);
    if (a.kind != b.kind) return false;
    if (a.text != b.text) return false;
    if (a.decl_type != b.decl_type) return false;
    if (!opt_expr_equal(a.lvalue, b.lvalue)) return false;
    if (!opt_expr_equal(a.expr, b.expr)) return false;
    if (!opt_stmt_equal(a.init, b.init)) return false;
    if (!opt_stmt_equal(a.step, b.step)) return false;
    if (!stmt_list_equal(a.body, b.body)) return false;
    if (!stmt_list_equal(a.else_body, b.else_body)) return false;
    return true;
}

bool attrs_equal(const std::vector<Attribute>& a, const std::vector<Attribute>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].args.size() != b[i].args.size()) return false;
        for (size_t j = 0; j < a[i].args.size(); ++j) {
            const AttrArg& x = a[i].args[j];
            const AttrArg& y = b[i].args[j];
            if (x.is_int != y.is_int || x.int_value != y.int_value || x.text != y.text)
                return false;
        }
    }
    return true;
}

} // namespace

bool ast_equal(const Expr& a, const Expr& b) { return expr_equal(a, b); }
bool ast_equal(const Stmt& a, const Stmt& b) { return stmt_equal(a, b); }

bool ast_equal(const ShaderModule& a, const ShaderModule& b) {
    if (a.name != b.name) return false;
    if (a.structs.size() != b.structs.size()) return false;
    for (size_t i = 0; i < a.structs.size(); ++i) {
        const StructDecl& x = a.structs[i];
        const StructDecl& y = b.structs[i];
        if (x.name != y.name || x.members.size() != y.members.size()) return false;
        if (!attrs_equal(x.attributes, y.attributes)) return false;
        for (size_t j = 0; j < x.members.size(); ++j)
            if (x.members[j].name != y.members[j].name || x.members[j].type != y.members[j].type)
                return false;
    }
    if (a.globals.size() != b.globals.size()) return false;
    for (size_t i = 0; i < a.globals.size(); ++i) {
        const GlobalDecl& x = a.globals[i];
        const GlobalDecl& y = b.globals[i];
        if (x.name != y.name || x.type != y.type || x.qualifier != y.qualifier) return false;
        if (!attrs_equal(x.attributes, y.attributes)) return false;
        if (!opt_expr_equal(x.init, y.init)) return false;
    }
    if (a.functions.size() != b.functions.size()) return false;
    for (size_t i = 0; i < a.functions.size(); ++i) {
        const FunctionDecl& x = a.functions[i];
        const FunctionDecl& y = b.functions[i];
        if (x.name != y.name || x.stage != y.stage || x.return_type != y.return_type)
            return false;
        if (!attrs_equal(x.attributes, y.attributes)) return false;
        if (x.params.size() != y.params.size()) return false;
        for (size_t j = 0; j < x.params.size(); ++j) {
            if (x.params[j].name != y.params[j].name || x.params[j].type != y.params[j].type)
                return false;
            if (!attrs_equal(x.params[j].attributes, y.params[j].attributes)) return false;
        }
        if (!stmt_list_equal(x.body, y.body)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// dump_module
// ---------------------------------------------------------------------------

namespace {

struct Dumper {
    std::ostringstream out;
    int depth = 0;

    void line(const std::string& s) {
        for (int i = 0; i < depth; ++i) out << "  ";
        out << s << "\n";
    }

    void dump(const Expr& e) {
        std::string head;
        switch (e.kind) {
        case ExprKind::IntLit: head = "int-lit " + std::to_string(e.int_value); break;
        case ExprKind::FloatLit: head = "float-lit " + std::to_string(e.float_value); break;
        case ExprKind::BoolLit: head = std::string("bool-lit ") + (e.bool_value ? "true" : "false"); break;
        case ExprKind::VarRef: head = "var-ref " + e.text; break;
        case ExprKind::Binary: head = "binary " + e.text; break;
        case ExprKind::Unary: head = "unary " + e.text; break;
        case ExprKind::Call: head = "call " + e.text; break;
        case ExprKind::Construct: head = "construct " + type_to_string(e.ctor_type); break;
        case ExprKind::MemberAccess: head = "member " + e.text; break;
        case ExprKind::Swizzle: head = "swizzle " + e.text; break;
        case ExprKind::MemberOrSwizzle: head = "member-or-swizzle " + e.text; break;
        case ExprKind::Index: head = "index"; break;
        case ExprKind::Ternary: head = "ternary"; break;
        }
        line(head);
        ++depth;
        for (const auto& a : e.args) dump(*a);
        --depth;
    }

    void dump(const Stmt& s) {
        switch (s.kind) {
        case StmtKind::VarDecl:
            line("var-decl " + s.text + " " + type_to_string(*s.decl_type));
            break;
        case StmtKind::Assign: line("assign " + s.text); break;
        case StmtKind::If: line("if"); break;
        case StmtKind::For: line("for"); break;
        case StmtKind::While: line("while"); break;
        case StmtKind::Return: line("return"); break;
        case StmtKind::Break: line("break"); break;
        case StmtKind::Continue: line("continue"); break;
        case StmtKind::ExprStmt: line("expr-stmt"); break;
        case StmtKind::Block: line("block"); break;
        }
        ++depth;
        if (s.lvalue) dump(*s.lvalue);
        if (s.expr) dump(*s.expr);
        if (s.init) dump(*s.init);
        if (s.step) dump(*s.step);
        for (const auto& b : s.body) dump(*b);
        if (!s.else_body.empty()) {
            line("else");
            ++depth;
            for (const auto& b : s.else_body) dump(*b);
            --depth;
        }
        --depth;
    }
};

} // namespace

std::string dump_module(const ShaderModule& module) {
    Dumper d;
    d.line("module " + module.name);
    ++d.depth;
    for (const auto& s : module.structs) {
        d.line("struct " + s.name);
        ++d.depth;
        for (const auto& m : s.members) d.line("member " + m.name + " " + type_to_string(m.type));
        --d.depth;
    }
    for (const auto& g : module.globals) {
        std::string q = g.qualifier == GlobalQualifier::Uniform  ? "uniform"
                        : g.qualifier == GlobalQualifier::Const ? "const"
                                                                : "plain";
        d.line("global " + g.name + " " + type_to_string(g.type) + " " + q);
        if (g.init) {
            ++d.depth;
            d.dump(*g.init);
            --d.depth;
        }
    }
    for (const auto& f : module.functions) {
        d.line("function " + f.name + " stage=" + stage_name(f.stage) +
               " return=" + type_to_string(f.return_type));
        ++d.depth;
        for (const auto& p : f.params) d.line("param " + p.name + " " + type_to_string(p.type));
        for (const auto& s : f.body) d.dump(*s);
        --d.depth;
    }
    return d.out.str();
}

} // namespace crossgl
