#include <map>
#include <set>
#include <sstream>

#include "crossgl/importers.hpp"
#include "crossgl/lexer.hpp"
#include "crossgl/parser.hpp"

// CUDA import: __global__ functions become compute-stage functions,
// __device__ functions become plain functions, host functions are skipped
// with a warning (kernel launches are recognized inside them). Thread-index
// expressions map to the reserved compute builtins, raw pointer parameters
// map to unsized arrays, and the generated vector-support preamble is
// stripped by its marker comments before parsing.

namespace crossgl {

namespace {

std::vector<std::string> cuda_keywords() {
    std::vector<std::string> kw = crossgl_keywords();
    for (const char* extra :
         {"__global__", "__device__", "__host__", "__shared__", "__constant__",
          "__forceinline__", "__restrict__", "inline", "static", "constexpr", "unsigned",
          "signed", "char", "short", "long", "double", "float2", "float3", "float4",
          "switch", "template", "namespace", "using", "typedef", "sizeof"})
        kw.push_back(extra);
    return kw;
}

std::string strip_marked_preamble(const std::string& text) {
    const std::string begin = "// --- begin vector support ---";
    const std::string end = "// --- end vector support ---";
    size_t b = text.find(begin);
    size_t e = text.find(end);
    if (b == std::string::npos || e == std::string::npos || e < b) return text;
    std::string out = text.substr(0, b);
    // Keep line numbers roughly aligned by substituting blank lines.
    for (size_t i = b; i < e + end.size(); ++i)
        if (text[i] == '\n') out += '\n';
    out += text.substr(e + end.size());
    return out;
}

std::string strip_directives(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        size_t first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] == '#')
            out << "\n";
        else
            out << line << "\n";
    }
    return out.str();
}

// CUDA vector type keywords become the CrossGL spellings before parsing, so
// the shared statement/expression grammar applies unchanged.
void rewrite_type_tokens(std::vector<Token>& tokens) {
    for (auto& t : tokens) {
        if (t.kind != TokenKind::Keyword) continue;
        if (t.text == "float2") t.text = "vec2";
        else if (t.text == "float3") t.text = "vec3";
        else if (t.text == "float4") t.text = "vec4";
    }
}

const std::set<std::string>& texture_markers() {
    static const std::set<std::string> names = {"tex1D",       "tex2D",      "tex3D",
                                                "surf1Dread",  "surf2Dread", "surf1Dwrite",
                                                "surf2Dwrite", "cudaTextureObject_t"};
    return names;
}

// -- IR rewrites after parsing ------------------------------------------------

using Rewrite = std::function<ExprPtr(const Expr&)>;

void rewrite_expr(ExprPtr& e, const Rewrite& fn) {
    if (ExprPtr r = fn(*e)) {
        e = std::move(r);
        return;
    }
    for (auto& a : e->args) rewrite_expr(a, fn);
}

void rewrite_stmt(Stmt& s, const Rewrite& fn) {
    if (s.lvalue) rewrite_expr(s.lvalue, fn);
    if (s.expr) rewrite_expr(s.expr, fn);
    if (s.init) rewrite_stmt(*s.init, fn);
    if (s.step) rewrite_stmt(*s.step, fn);
    for (auto& b : s.body) rewrite_stmt(*b, fn);
    for (auto& b : s.else_body) rewrite_stmt(*b, fn);
}

// threadIdx.x / blockIdx.y / blockDim.z (optionally wrapped in int(...))
// map to the reserved compute builtins.
ExprPtr map_thread_builtin(const Expr& e) {
    const Expr* member = &e;
    if (e.kind == ExprKind::Construct && e.ctor_type.is_int() && e.args.size() == 1)
        member = e.args[0].get();
    if (member->kind != ExprKind::MemberOrSwizzle && member->kind != ExprKind::MemberAccess)
        return nullptr;
    if (member->args[0]->kind != ExprKind::VarRef || member->text.size() != 1) return nullptr;
    const std::string& base = member->args[0]->text;
    std::string prefix;
    if (base == "threadIdx") prefix = "thread_id_";
    else if (base == "blockIdx") prefix = "block_id_";
    else if (base == "blockDim") prefix = "block_dim_";
    else return nullptr;
    return Expr::var_ref(prefix + member->text, e.loc);
}

// make_floatN / make_matN calls become constructor calls; f-suffixed math
// spellings fold back to the builtin names.
ExprPtr map_cuda_calls(const Expr& e) {
    if (e.kind != ExprKind::Call) return nullptr;
    static const std::map<std::string, Type> ctors = {
        {"make_float2", Type::vec(2)}, {"make_float3", Type::vec(3)},
        {"make_float4", Type::vec(4)}, {"make_mat2", Type::mat(2)},
        {"make_mat3", Type::mat(3)},   {"make_mat4", Type::mat(4)}};
    static const std::map<std::string, std::string> math = {
        {"fmaxf", "max"},   {"fminf", "min"}, {"fabsf", "abs"}, {"powf", "pow"},
        {"sqrtf", "sqrt"},  {"floorf", "floor"}, {"sinf", "sin"}, {"cosf", "cos"}};
    auto ctor = ctors.find(e.text);
    if (ctor != ctors.end()) {
        std::vector<ExprPtr> args;
        for (const auto& a : e.args) args.push_back(a->clone());
        ExprPtr out = Expr::construct(ctor->second, std::move(args), e.loc);
        for (auto& a : out->args) rewrite_expr(a, map_cuda_calls);
        for (auto& a : out->args) rewrite_expr(a, map_thread_builtin);
        return out;
    }
    auto m = math.find(e.text);
    if (m != math.end()) {
        std::vector<ExprPtr> args;
        for (const auto& a : e.args) args.push_back(a->clone());
        ExprPtr out = Expr::call(m->second, std::move(args), e.loc);
        for (auto& a : out->args) rewrite_expr(a, map_cuda_calls);
        for (auto& a : out->args) rewrite_expr(a, map_thread_builtin);
        return out;
    }
    return nullptr;
}

struct CudaTopParser : Parser {
    using Parser::Parser;

    ShaderModule module;
    std::vector<Diagnostic> warnings;

    bool accept_any_keyword(std::initializer_list<const char*> names) {
        for (const char* n : names)
            if (accept(TokenKind::Keyword, n)) return true;
        return false;
    }

    // Balanced-brace skip for host function bodies; reports kernel launches.
    void skip_host_body(const std::string& fn_name, const SourceLocation& loc) {
        expect(TokenKind::Punct, "{", "{");
        int braces = 1;
        int angle_run = 0;
        bool launch_seen = false;
        while (braces > 0) {
            if (at_eof()) fail("\"}\"");
            const Token& t = advance();
            if (t.is(TokenKind::Punct, "{")) ++braces;
            if (t.is(TokenKind::Punct, "}")) --braces;
            if (t.is(TokenKind::Operator, "<")) {
                if (++angle_run == 3) launch_seen = true;
            } else {
                angle_run = 0;
            }
        }
        warnings.push_back({loc, Severity::Warning,
                            "host function " + fn_name + " skipped (host code is not translated)"});
        if (launch_seen)
            warnings.push_back({loc, Severity::Warning,
                                "kernel launch in " + fn_name + " skipped"});
    }

    Type parse_cuda_type() {
        if (check(TokenKind::Keyword, "unsigned") || check(TokenKind::Keyword, "long") ||
            check(TokenKind::Keyword, "short") || check(TokenKind::Keyword, "char") ||
            check(TokenKind::Keyword, "double"))
            throw UnsupportedConstruct(peek().loc,
                                       "unsupported CUDA type " + peek().text);
        return parse_type_prefix();
    }

    Param parse_param() {
        Param p;
        accept(TokenKind::Keyword, "const");
        Type base = parse_cuda_type();
        bool pointer = false;
        while (accept(TokenKind::Operator, "*")) pointer = true;
        accept(TokenKind::Operator, "&");
        accept(TokenKind::Keyword, "__restrict__");
        Token name = expect(TokenKind::Identifier, {}, "parameter name");
        p.name = name.text;
        p.loc = name.loc;
        if (pointer) {
            // Raw pointers map to unsized arrays; the IR has no pointers.
            p.type = Type::array(std::move(base), std::nullopt);
        } else {
            p.type = apply_array_suffixes(std::move(base));
        }
        return p;
    }

    // Kernel launches inside device code are dynamic parallelism.
    void reject_device_launches() {
        int braces = 0;
        int angle_run = 0;
        for (int i = 0;; ++i) {
            const Token& t = peek(i);
            if (t.kind == TokenKind::Eof) return;
            if (t.is(TokenKind::Punct, "{")) ++braces;
            if (t.is(TokenKind::Punct, "}") && --braces == 0) return;
            if (t.is(TokenKind::Operator, "<")) {
                if (++angle_run == 3)
                    throw UnsupportedConstruct(t.loc, "dynamic parallelism is not supported");
            } else {
                angle_run = 0;
            }
        }
    }

    void parse_function_like(bool is_global, bool is_device) {
        Type ret = parse_cuda_type();
        Token name = expect(TokenKind::Identifier, {}, "function name");
        expect(TokenKind::Punct, "(", "(");
        std::vector<Param> params;
        if (!check(TokenKind::Punct, ")")) {
            do {
                params.push_back(parse_param());
            } while (accept(TokenKind::Punct, ","));
        }
        expect(TokenKind::Punct, ")", ")");
        if (!is_global && !is_device) {
            skip_host_body(name.text, name.loc);
            return;
        }
        FunctionDecl f;
        f.name = name.text;
        f.loc = name.loc;
        f.return_type = std::move(ret);
        f.params = std::move(params);
        f.stage = is_global ? Stage::Compute : Stage::None;
        reject_device_launches();
        f.body = parse_brace_block();
        module.functions.push_back(std::move(f));
    }

    void run() {
        while (!at_eof()) {
            if (check(TokenKind::Keyword, "__shared__"))
                throw UnsupportedConstruct(peek().loc, "__shared__ memory is not supported");
            if (check(TokenKind::Keyword, "template") || check(TokenKind::Keyword, "namespace"))
                throw UnsupportedConstruct(peek().loc,
                                           "unsupported CUDA construct " + peek().text);
            if (accept(TokenKind::Keyword, "struct")) {
                StructDecl s;
                Token name = expect(TokenKind::Identifier, {}, "struct name");
                s.name = name.text;
                s.loc = name.loc;
                expect(TokenKind::Punct, "{", "{");
                while (!check(TokenKind::Punct, "}")) {
                    if (at_eof()) fail("\"}\"");
                    StructMember m;
                    Type base = parse_cuda_type();
                    Token mname = expect(TokenKind::Identifier, {}, "member name");
                    m.name = mname.text;
                    m.loc = mname.loc;
                    m.type = apply_array_suffixes(std::move(base));
                    expect(TokenKind::Punct, ";", ";");
                    s.members.push_back(std::move(m));
                }
                advance();
                expect(TokenKind::Punct, ";", ";");
                module.structs.push_back(std::move(s));
                continue;
            }
            // Qualifier soup before functions and constants.
            bool is_global = false, is_device = false, is_const = false;
            for (;;) {
                if (accept(TokenKind::Keyword, "__global__")) { is_global = true; continue; }
                if (accept(TokenKind::Keyword, "__device__")) { is_device = true; continue; }
                if (accept_any_keyword({"__host__", "__forceinline__", "inline", "static"}))
                    continue;
                if (accept(TokenKind::Keyword, "constexpr")) { is_const = true; continue; }
                if (accept(TokenKind::Keyword, "const")) { is_const = true; continue; }
                break;
            }
            if (is_const && !is_global) {
                GlobalDecl g;
                g.qualifier = GlobalQualifier::Const;
                Type base = parse_cuda_type();
                Token name = expect(TokenKind::Identifier, {}, "constant name");
                g.name = name.text;
                g.loc = name.loc;
                g.type = apply_array_suffixes(std::move(base));
                expect(TokenKind::Operator, "=", "=");
                g.init = parse_expression();
                expect(TokenKind::Punct, ";", ";");
                module.globals.push_back(std::move(g));
                continue;
            }
            parse_function_like(is_global, is_device);
        }
    }
};

} // namespace

ImportResult import_cuda(const std::string& source, const std::string& file,
                         const std::string& module_name) {
    std::string text = strip_directives(strip_marked_preamble(source));
    auto tokens = tokenize_with_keywords(text, file, cuda_keywords());
    rewrite_type_tokens(tokens);
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Identifier && texture_markers().count(t.text))
            throw UnsupportedConstruct(t.loc, "texture/surface operations are not supported");
        if (t.kind == TokenKind::Keyword && t.text == "__shared__")
            throw UnsupportedConstruct(t.loc, "__shared__ memory is not supported");
    }

    CudaTopParser parser(tokens);
    parser.module.name = module_name;
    parser.run();

    for (auto& f : parser.module.functions) {
        for (auto& s : f.body) {
            rewrite_stmt(*s, map_cuda_calls);
            rewrite_stmt(*s, map_thread_builtin);
        }
    }
    return {std::move(parser.module), std::move(parser.warnings)};
}

} // namespace crossgl
