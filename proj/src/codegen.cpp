#include "crossgl/codegen.hpp"

#include "crossgl/semantics.hpp"
#include "emitter_common.hpp"

namespace crossgl {

const char* target_name(TargetLanguage t) {
    switch (t) {
    case TargetLanguage::CrossGL: return "crossgl";
    case TargetLanguage::GLSL: return "glsl";
    case TargetLanguage::HLSL: return "hlsl";
    case TargetLanguage::Metal: return "metal";
    case TargetLanguage::CUDA: return "cuda";
    case TargetLanguage::RustSrc: return "rust";
    }
    return "?";
}

std::string extension_for(TargetLanguage target, Stage stage) {
    switch (target) {
    case TargetLanguage::CrossGL: return ".cgl";
    case TargetLanguage::GLSL:
        switch (stage) {
        case Stage::Vertex: return ".vert";
        case Stage::Fragment: return ".frag";
        case Stage::Compute: return ".comp";
        default: return ".glsl";
        }
    case TargetLanguage::HLSL: return ".hlsl";
    case TargetLanguage::Metal: return ".metal";
    case TargetLanguage::CUDA: return ".cu";
    case TargetLanguage::RustSrc: return ".rs";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

void BackendRegistry::register_backend(Backend backend) {
    if (find(backend.name)) throw DuplicateBackend(backend.name);
    backends_.push_back(std::move(backend));
}

const Backend* BackendRegistry::find(const std::string& name) const {
    for (const auto& b : backends_)
        if (b.name == name) return &b;
    return nullptr;
}

BackendRegistry BackendRegistry::with_builtins() {
    BackendRegistry r;
    r.register_backend({"crossgl", "CrossGL pretty-printer", generate_crossgl});
    r.register_backend({"glsl", "OpenGL GLSL, one unit per stage", generate_glsl});
    r.register_backend({"hlsl", "DirectX HLSL", generate_hlsl});
    r.register_backend({"metal", "Metal Shading Language", generate_metal});
    r.register_backend({"cuda", "CUDA C++", generate_cuda});
    r.register_backend({"rust", "Rust source with a vector-math preamble", generate_rust});
    return r;
}

std::vector<OutputUnit> generate(const ShaderModule& module, TargetLanguage target,
                                 const std::string& stem) {
    const std::string s = stem.empty() ? module.name : stem;
    switch (target) {
    case TargetLanguage::CrossGL: return generate_crossgl(module, s);
    case TargetLanguage::GLSL: return generate_glsl(module, s);
    case TargetLanguage::HLSL: return generate_hlsl(module, s);
    case TargetLanguage::Metal: return generate_metal(module, s);
    case TargetLanguage::CUDA: return generate_cuda(module, s);
    case TargetLanguage::RustSrc: return generate_rust(module, s);
    }
    return {};
}

// ---------------------------------------------------------------------------
// map_type
// ---------------------------------------------------------------------------

namespace {

std::string scalar_spelling(ScalarKind k, TargetLanguage target) {
    switch (k) {
    case ScalarKind::Int: return target == TargetLanguage::RustSrc ? "i32" : "int";
    case ScalarKind::Float: return target == TargetLanguage::RustSrc ? "f32" : "float";
    case ScalarKind::Bool: return "bool";
    case ScalarKind::Void: return target == TargetLanguage::RustSrc ? "()" : "void";
    }
    return "?";
}

} // namespace

std::string map_type(const Type& t, TargetLanguage target) {
    switch (t.kind) {
    case Type::Kind::Scalar: return scalar_spelling(t.scalar, target);
    case Type::Kind::Vector:
        switch (target) {
        case TargetLanguage::CrossGL:
        case TargetLanguage::GLSL: return "vec" + std::to_string(t.dim);
        case TargetLanguage::HLSL:
        case TargetLanguage::Metal:
        case TargetLanguage::CUDA: return "float" + std::to_string(t.dim);
        case TargetLanguage::RustSrc: return "Vec" + std::to_string(t.dim);
        }
        return "?";
    case Type::Kind::Matrix:
        switch (target) {
        case TargetLanguage::CrossGL:
        case TargetLanguage::GLSL:
        case TargetLanguage::CUDA: return "mat" + std::to_string(t.dim);
        case TargetLanguage::HLSL:
        case TargetLanguage::Metal:
            return "float" + std::to_string(t.dim) + "x" + std::to_string(t.dim);
        case TargetLanguage::RustSrc: return "Mat" + std::to_string(t.dim);
        }
        return "?";
    case Type::Kind::Array: {
        if (target == TargetLanguage::RustSrc) {
            std::string elem = map_type(*t.element, target);
            if (t.array_size)
                return "[" + elem + "; " + std::to_string(*t.array_size) + "]";
            return "[" + elem + "]";
        }
        std::string s = map_type(*t.element, target);
        s += "[";
        if (t.array_size) s += std::to_string(*t.array_size);
        s += "]";
        return s;
    }
    case Type::Kind::Named: return t.name;
    case Type::Kind::Sampler2D:
        switch (target) {
        case TargetLanguage::CrossGL:
        case TargetLanguage::GLSL: return "sampler2D";
        case TargetLanguage::HLSL: return "Texture2D";
        case TargetLanguage::Metal: return "texture2d<float>";
        case TargetLanguage::CUDA: return "cudaTextureObject_t";
        case TargetLanguage::RustSrc:
            throw UnsupportedType({}, "sampler2D has no Rust mapping");
        }
        return "?";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Shared emitter helpers
// ---------------------------------------------------------------------------

int expr_precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Ternary: return 1;
    case ExprKind::Binary: {
        const std::string& op = e.text;
        if (op == "||") return 2;
        if (op == "&&") return 3;
        if (op == "==" || op == "!=") return 4;
        if (op == "<" || op == "<=" || op == ">" || op == ">=") return 5;
        if (op == "+" || op == "-") return 6;
        return 7; // * / %
    }
    case ExprKind::Unary: return 8;
    case ExprKind::Call:
    case ExprKind::Construct:
    case ExprKind::MemberAccess:
    case ExprKind::Swizzle:
    case ExprKind::MemberOrSwizzle:
    case ExprKind::Index: return 9;
    default: return 10; // literals, var refs
    }
}

namespace {

void collect_callees(const Expr& e, std::set<std::string>& out) {
    if (e.kind == ExprKind::Call) out.insert(e.text);
    for (const auto& a : e.args) collect_callees(*a, out);
}

void collect_callees(const Stmt& s, std::set<std::string>& out) {
    if (s.lvalue) collect_callees(*s.lvalue, out);
    if (s.expr) collect_callees(*s.expr, out);
    if (s.init) collect_callees(*s.init, out);
    if (s.step) collect_callees(*s.step, out);
    for (const auto& b : s.body) collect_callees(*b, out);
    for (const auto& b : s.else_body) collect_callees(*b, out);
}

void collect_var_refs(const Expr& e, std::set<std::string>& out) {
    if (e.kind == ExprKind::VarRef) out.insert(e.text);
    for (const auto& a : e.args) collect_var_refs(*a, out);
}

void collect_var_refs(const Stmt& s, std::set<std::string>& out) {
    if (s.lvalue) collect_var_refs(*s.lvalue, out);
    if (s.expr) collect_var_refs(*s.expr, out);
    if (s.init) collect_var_refs(*s.init, out);
    if (s.step) collect_var_refs(*s.step, out);
    for (const auto& b : s.body) collect_var_refs(*b, out);
    for (const auto& b : s.else_body) collect_var_refs(*b, out);
}

} // namespace

std::set<std::string> reachable_functions(const ShaderModule& module,
                                          const std::vector<std::string>& roots) {
    std::set<std::string> seen;
    std::vector<std::string> work(roots.begin(), roots.end());
    while (!work.empty()) {
        std::string name = work.back();
        work.pop_back();
        if (!seen.insert(name).second) continue;
        const FunctionDecl* fn = module.find_function(name);
        if (!fn) continue;
        std::set<std::string> callees;
        for (const auto& s : fn->body) collect_callees(*s, callees);
        for (const auto& c : callees)
            if (module.find_function(c)) work.push_back(c);
    }
    return seen;
}

std::set<std::string> used_globals(const ShaderModule& module, const FunctionDecl& fn) {
    std::set<std::string> result;
    for (const std::string& name : reachable_functions(module, {fn.name})) {
        const FunctionDecl* f = module.find_function(name);
        if (!f) continue;
        std::set<std::string> refs;
        for (const auto& s : f->body) collect_var_refs(*s, refs);
        for (const auto& r : refs) {
            const GlobalDecl* g = module.find_global(r);
            if (g && g->qualifier != GlobalQualifier::Const) result.insert(r);
        }
    }
    return result;
}

bool uses_compute_builtins(const FunctionDecl& fn) {
    std::set<std::string> refs;
    for (const auto& s : fn.body) collect_var_refs(*s, refs);
    for (const auto& name : compute_builtin_names())
        if (refs.count(name)) return true;
    return false;
}

const StructMember* find_clip_member(const StructDecl& s) {
    for (const auto& m : s.members)
        if ((m.name == "position" || m.name == "clipPosition") && m.type == Type::vec(4))
            return &m;
    return nullptr;
}

// ---------------------------------------------------------------------------
// CEmitter
// ---------------------------------------------------------------------------

std::string CEmitter::declare(const Type& t, const std::string& name) {
    if (t.is_array()) {
        std::string suffix;
        const Type* cur = &t;
        while (cur->is_array()) {
            suffix += "[";
            if (cur->array_size) suffix += std::to_string(*cur->array_size);
            suffix += "]";
            cur = cur->element.get();
        }
        return type_name(*cur) + " " + name + suffix;
    }
    return type_name(t) + " " + name;
}

std::string CEmitter::sub_expr(const Expr& e, int min_prec, bool parens_on_equal) {
    int p = expr_precedence(e);
    bool parens = parens_on_equal ? p <= min_prec : p < min_prec;
    std::string s = expr(e);
    return parens ? "(" + s + ")" : s;
}

std::string CEmitter::call_args(const Expr& e) {
    std::string s;
    for (size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + expr(*e.args[i]);
    return s;
}

std::string CEmitter::call_expr(const Expr& e) { return ident(e.text) + "(" + call_args(e) + ")"; }

std::string CEmitter::binary_expr(const Expr& e) {
    int p = expr_precedence(e);
    return sub_expr(*e.args[0], p) + " " + e.text + " " + sub_expr(*e.args[1], p, true);
}

std::string CEmitter::construct_expr(const Expr& e) {
    return type_name(e.ctor_type) + "(" + call_args(e) + ")";
}

std::string CEmitter::member_expr(const Expr& e) {
    return sub_expr(*e.args[0], 9) + "." + e.text;
}

std::string CEmitter::index_expr(const Expr& e) {
    return sub_expr(*e.args[0], 9) + "[" + expr(*e.args[1]) + "]";
}

std::string CEmitter::ternary_expr(const Expr& e) {
    return sub_expr(*e.args[0], 1, /*parens_on_equal=*/true) + " ? " + expr(*e.args[1]) +
           " : " + expr(*e.args[2]);
}

std::string CEmitter::expr(const Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit: return int_literal(e);
    case ExprKind::FloatLit: return float_literal(e);
    case ExprKind::BoolLit: return bool_literal(e);
    case ExprKind::VarRef: return var_ref(e);
    case ExprKind::Binary: return binary_expr(e);
    case ExprKind::Unary: {
        const Expr& operand = *e.args[0];
        std::string s = expr(operand);
        // `--a` would lex as a different token in most targets; negative
        // literals reach here via their printed minus sign.
        bool parens = expr_precedence(operand) < 8 ||
                      (operand.kind == ExprKind::Unary && operand.text == e.text) ||
                      (e.text == "-" && !s.empty() && s[0] == '-');
        return e.text + (parens ? "(" + s + ")" : s);
    }
    case ExprKind::Call: return call_expr(e);
    case ExprKind::Construct: return construct_expr(e);
    case ExprKind::MemberAccess:
    case ExprKind::Swizzle:
    case ExprKind::MemberOrSwizzle: return member_expr(e);
    case ExprKind::Index: return index_expr(e);
    case ExprKind::Ternary: return ternary_expr(e);
    }
    return "?";
}

void CEmitter::var_decl_stmt(const Stmt& s) {
    std::string decl = declare(*s.decl_type, ident(s.text));
    if (s.expr) decl += " = " + expr(*s.expr);
    line(decl + ";");
}

void CEmitter::assign_stmt(const Stmt& s) {
    line(expr(*s.lvalue) + " " + s.text + " " + expr(*s.expr) + ";");
}

void CEmitter::if_stmt(const Stmt& s) {
    line("if (" + expr(*s.expr) + ") {");
    body(s.body);
    if (!s.else_body.empty()) {
        line("} else {");
        body(s.else_body);
    }
    line("}");
}

std::string CEmitter::simple_stmt(const Stmt& s) {
    if (s.kind == StmtKind::VarDecl) {
        std::string decl = declare(*s.decl_type, ident(s.text));
        if (s.expr) decl += " = " + expr(*s.expr);
        return decl;
    }
    if (s.kind == StmtKind::Assign)
        return expr(*s.lvalue) + " " + s.text + " " + expr(*s.expr);
    return expr(*s.expr);
}

void CEmitter::for_stmt(const Stmt& s) {
    std::string head = "for (";
    if (s.init) head += simple_stmt(*s.init);
    head += "; ";
    if (s.expr) head += expr(*s.expr);
    head += "; ";
    if (s.step) head += simple_stmt(*s.step);
    head += ") {";
    line(head);
    body(s.body);
    line("}");
}

void CEmitter::while_stmt(const Stmt& s) {
    line("while (" + expr(*s.expr) + ") {");
    body(s.body);
    line("}");
}

void CEmitter::return_stmt(const Stmt& s) {
    if (s.expr)
        line("return " + expr(*s.expr) + ";");
    else
        line("return;");
}

void CEmitter::expr_stmt(const Stmt& s) { line(expr(*s.expr) + ";"); }

void CEmitter::block_stmt(const Stmt& s) {
    line("{");
    body(s.body);
    line("}");
}

void CEmitter::stmt(const Stmt& s) {
    switch (s.kind) {
    case StmtKind::VarDecl: var_decl_stmt(s); break;
    case StmtKind::Assign: assign_stmt(s); break;
    case StmtKind::If: if_stmt(s); break;
    case StmtKind::For: for_stmt(s); break;
    case StmtKind::While: while_stmt(s); break;
    case StmtKind::Return: return_stmt(s); break;
    case StmtKind::Break: line("break;"); break;
    case StmtKind::Continue: line("continue;"); break;
    case StmtKind::ExprStmt: expr_stmt(s); break;
    case StmtKind::Block: block_stmt(s); break;
    }
}

} // namespace crossgl
