#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "crossgl/importers.hpp"
#include "crossgl/lexer.hpp"
#include "crossgl/parser.hpp"
#include "crossgl/semantics.hpp"

namespace crossgl {

const char* source_language_name(SourceLanguage s) {
    switch (s) {
    case SourceLanguage::CrossGL: return "crossgl";
    case SourceLanguage::GLSL: return "glsl";
    case SourceLanguage::CUDA: return "cuda";
    }
    return "?";
}

LanguageId detect_language(const std::string& filename) {
    auto dot = filename.find_last_of('.');
    if (dot == std::string::npos) throw UnknownExtension(filename);
    std::string ext = filename.substr(dot);
    if (ext == ".cgl") return {true, SourceLanguage::CrossGL, TargetLanguage::CrossGL};
    if (ext == ".glsl" || ext == ".vert" || ext == ".frag" || ext == ".comp")
        return {true, SourceLanguage::GLSL, TargetLanguage::GLSL};
    if (ext == ".cu") return {true, SourceLanguage::CUDA, TargetLanguage::CUDA};
    if (ext == ".hlsl") return {false, SourceLanguage::CrossGL, TargetLanguage::HLSL};
    if (ext == ".metal") return {false, SourceLanguage::CrossGL, TargetLanguage::Metal};
    if (ext == ".rs") return {false, SourceLanguage::CrossGL, TargetLanguage::RustSrc};
    throw UnknownExtension(filename);
}

Stage infer_glsl_stage(const std::string& filename, const std::string& text) {
    auto dot = filename.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : filename.substr(dot);
    if (ext == ".vert") return Stage::Vertex;
    if (ext == ".frag") return Stage::Fragment;
    if (ext == ".comp") return Stage::Compute;
    if (text.find("gl_Position") != std::string::npos) return Stage::Vertex;
    if (text.find("local_size_x") != std::string::npos) return Stage::Compute;
    return Stage::Fragment;
}

namespace {

// GLSL-only keywords added on top of the CrossGL set; the expression and
// statement sub-grammars are shared with the CrossGL parser.
std::vector<std::string> glsl_keywords() {
    std::vector<std::string> kw = crossgl_keywords();
    for (const char* extra : {"in", "out", "inout", "layout", "buffer", "discard",
                              "precision", "highp", "mediump", "lowp", "flat", "smooth",
                              "noperspective", "attribute", "varying", "switch"})
        kw.push_back(extra);
    return kw;
}

// Directive lines (#version, #extension, ...) are blanked before lexing so
// token locations stay meaningful.
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

struct IoVar {
    std::string name;
    Type type;
    SourceLocation loc;
};

struct BufferParam {
    std::string name; // member name, the kernel parameter
    Type type;
};

struct UnitDecls {
    Stage stage = Stage::Fragment;
    std::vector<StructDecl> structs;
    std::vector<GlobalDecl> globals;
    std::vector<IoVar> ins, outs;
    std::vector<BufferParam> buffers;     // SSBO members in binding order
    std::vector<GlobalDecl> param_scalars; // uniforms named cgl_param_*
    std::vector<FunctionDecl> functions;
};

struct GlslTopParser : Parser {
    using Parser::Parser;

    UnitDecls decls;

    void skip_layout() {
        if (!accept(TokenKind::Keyword, "layout")) return;
        expect(TokenKind::Punct, "(", "(");
        int parens = 1;
        while (parens > 0) {
            if (at_eof()) fail("\")\"");
            if (check(TokenKind::Punct, "(")) ++parens;
            if (check(TokenKind::Punct, ")")) --parens;
            advance();
        }
    }

    void parse_buffer_block() {
        expect(TokenKind::Keyword, "buffer", "buffer");
        expect(TokenKind::Identifier, {}, "buffer block name");
        expect(TokenKind::Punct, "{", "{");
        while (!check(TokenKind::Punct, "}")) {
            if (at_eof()) fail("\"}\"");
            Type base = parse_type_prefix();
            Token name = expect(TokenKind::Identifier, {}, "member name");
            Type full = apply_array_suffixes(std::move(base));
            expect(TokenKind::Punct, ";", ";");
            decls.buffers.push_back({name.text, std::move(full)});
        }
        advance();
        if (check(TokenKind::Identifier)) advance(); // optional instance name
        expect(TokenKind::Punct, ";", ";");
    }

    void parse_io_var(bool is_in) {
        Type base = parse_type_prefix();
        Token name = expect(TokenKind::Identifier, {}, "variable name");
        Type full = apply_array_suffixes(std::move(base));
        expect(TokenKind::Punct, ";", ";");
        (is_in ? decls.ins : decls.outs).push_back({name.text, std::move(full), name.loc});
    }

    void parse_global(GlobalQualifier qualifier) {
        GlobalDecl g;
        g.qualifier = qualifier;
        Type base = parse_type_prefix();
        Token name = expect(TokenKind::Identifier, {}, "global name");
        g.name = name.text;
        g.loc = name.loc;
        g.type = apply_array_suffixes(std::move(base));
        if (accept(TokenKind::Operator, "=")) g.init = parse_expression();
        expect(TokenKind::Punct, ";", ";");
        decls.globals.push_back(std::move(g));
    }

    void run(Stage stage) {
        decls.stage = stage;
        while (!at_eof()) {
            // Interpolation qualifiers carry no information we keep.
            while (accept(TokenKind::Keyword, "flat") || accept(TokenKind::Keyword, "smooth") ||
                   accept(TokenKind::Keyword, "noperspective") ||
                   accept(TokenKind::Keyword, "precision") ||
                   accept(TokenKind::Keyword, "highp") ||
                   accept(TokenKind::Keyword, "mediump") || accept(TokenKind::Keyword, "lowp"))
                ;
            if (check(TokenKind::Keyword, "layout")) {
                skip_layout();
                if (check(TokenKind::Keyword, "buffer")) {
                    parse_buffer_block();
                } else if (accept(TokenKind::Keyword, "in")) {
                    if (accept(TokenKind::Punct, ";")) continue; // local_size declaration
                    parse_io_var(true);
                } else if (accept(TokenKind::Keyword, "out")) {
                    parse_io_var(false);
                } else if (accept(TokenKind::Keyword, "uniform")) {
                    parse_global(GlobalQualifier::Uniform);
                } else {
                    fail("in, out, buffer, or uniform after layout");
                }
                continue;
            }
            if (accept(TokenKind::Keyword, "in")) {
                parse_io_var(true);
                continue;
            }
            if (accept(TokenKind::Keyword, "out")) {
                parse_io_var(false);
                continue;
            }
            if (accept(TokenKind::Keyword, "uniform")) {
                parse_global(GlobalQualifier::Uniform);
                continue;
            }
            if (accept(TokenKind::Keyword, "const")) {
                parse_global(GlobalQualifier::Const);
                continue;
            }
            if (accept(TokenKind::Keyword, "struct")) {
                StructDecl s;
                Token name = expect(TokenKind::Identifier, {}, "struct name");
                s.name = name.text;
                s.loc = name.loc;
                expect(TokenKind::Punct, "{", "{");
                while (!check(TokenKind::Punct, "}")) {
                    if (at_eof()) fail("\"}\"");
                    StructMember m;
                    Type base = parse_type_prefix();
                    Token mname = expect(TokenKind::Identifier, {}, "member name");
                    m.name = mname.text;
                    m.loc = mname.loc;
                    m.type = apply_array_suffixes(std::move(base));
                    expect(TokenKind::Punct, ";", ";");
                    s.members.push_back(std::move(m));
                }
                advance();
                accept(TokenKind::Punct, ";");
                decls.structs.push_back(std::move(s));
                continue;
            }
            // Function or plain global.
            Type base = parse_type_prefix();
            Token name = expect(TokenKind::Identifier, {}, "a name");
            if (check(TokenKind::Punct, "(")) {
                FunctionDecl f;
                f.name = name.text;
                f.loc = name.loc;
                f.return_type = std::move(base);
                advance();
                if (!check(TokenKind::Punct, ")")) {
                    do {
                        Param p;
                        Type pbase = parse_type_prefix();
                        Token pname = expect(TokenKind::Identifier, {}, "parameter name");
                        p.name = pname.text;
                        p.loc = pname.loc;
                        p.type = apply_array_suffixes(std::move(pbase));
                        f.params.push_back(std::move(p));
                    } while (accept(TokenKind::Punct, ","));
                }
                expect(TokenKind::Punct, ")", ")");
                f.body = parse_brace_block();
                decls.functions.push_back(std::move(f));
            } else {
                GlobalDecl g;
                g.name = name.text;
                g.loc = name.loc;
                g.type = apply_array_suffixes(std::move(base));
                if (accept(TokenKind::Operator, "=")) g.init = parse_expression();
                expect(TokenKind::Punct, ";", ";");
                decls.globals.push_back(std::move(g));
            }
        }
    }
};

// -- IR rewriting helpers ----------------------------------------------------

using VarRewrite = std::function<ExprPtr(const Expr&)>; // null result = keep

void rewrite_expr(ExprPtr& e, const VarRewrite& fn) {
    if (ExprPtr replacement = fn(*e)) {
        e = std::move(replacement);
        return;
    }
    for (auto& a : e->args) rewrite_expr(a, fn);
}

void rewrite_stmt(Stmt& s, const VarRewrite& fn) {
    if (s.lvalue) rewrite_expr(s.lvalue, fn);
    if (s.expr) rewrite_expr(s.expr, fn);
    if (s.init) rewrite_stmt(*s.init, fn);
    if (s.step) rewrite_stmt(*s.step, fn);
    for (auto& b : s.body) rewrite_stmt(*b, fn);
    for (auto& b : s.else_body) rewrite_stmt(*b, fn);
}

void rewrite_function(FunctionDecl& f, const VarRewrite& fn) {
    for (auto& s : f.body) rewrite_stmt(*s, fn);
}

// int(gl_LocalInvocationID.x) and friends map back to the reserved
// compute builtins.
ExprPtr map_gl_compute_builtin(const Expr& e) {
    if (e.kind != ExprKind::Construct || !e.ctor_type.is_int() || e.args.size() != 1)
        return nullptr;
    const Expr& member = *e.args[0];
    if (member.kind != ExprKind::MemberOrSwizzle && member.kind != ExprKind::MemberAccess &&
        member.kind != ExprKind::Swizzle)
        return nullptr;
    if (member.args[0]->kind != ExprKind::VarRef || member.text.size() != 1) return nullptr;
    const std::string& base = member.args[0]->text;
    std::string prefix;
    if (base == "gl_LocalInvocationID") prefix = "thread_id_";
    else if (base == "gl_WorkGroupID") prefix = "block_id_";
    else if (base == "gl_WorkGroupSize") prefix = "block_dim_";
    else return nullptr;
    return Expr::var_ref(prefix + member.text, e.loc);
}

// Rewrites whole-variable references by name.
VarRewrite rename_vars(std::map<std::string, std::string> renames) {
    return [renames = std::move(renames)](const Expr& e) -> ExprPtr {
        if (e.kind != ExprKind::VarRef) return nullptr;
        auto it = renames.find(e.text);
        if (it == renames.end()) return nullptr;
        return Expr::var_ref(it->second, e.loc);
    };
}

// Rewrites variable references into member accesses on a record variable.
VarRewrite pack_into_record(std::set<std::string> names, std::string record_var) {
    return [names = std::move(names), record_var = std::move(record_var)](const Expr& e)
               -> ExprPtr {
        if (e.kind != ExprKind::VarRef || !names.count(e.text)) return nullptr;
        return Expr::member(Expr::var_ref(record_var, e.loc), e.text, e.loc);
    };
}

bool struct_equal(const StructDecl& a, const StructDecl& b) {
    if (a.name != b.name || a.members.size() != b.members.size()) return false;
    for (size_t i = 0; i < a.members.size(); ++i)
        if (a.members[i].name != b.members[i].name || a.members[i].type != b.members[i].type)
            return false;
    return true;
}

struct Importer {
    ShaderModule module;
    std::vector<Diagnostic> warnings;
    const StructDecl* vertex_output = nullptr; // for fragment `in` pairing
    std::string vertex_clip_member;

    void merge_struct(StructDecl s) {
        if (const StructDecl* existing = module.find_struct(s.name)) {
            if (!struct_equal(*existing, s))
                throw UnsupportedConstruct(s.loc, "struct " + s.name +
                                                      " redefined with a different shape");
            return;
        }
        module.structs.push_back(std::move(s));
    }

    void merge_global(GlobalDecl g) {
        if (module.find_global(g.name)) return; // shared across units
        module.globals.push_back(std::move(g));
    }

    void merge_function(FunctionDecl f) {
        if (const FunctionDecl* existing = module.find_function(f.name)) {
            ShaderModule a, b;
            a.functions.push_back(existing->clone());
            b.functions.push_back(f.clone());
            a.name = b.name = "x";
            if (!ast_equal(a, b))
                throw UnsupportedConstruct(f.loc, "function " + f.name +
                                                      " differs between units");
            return;
        }
        module.functions.push_back(std::move(f));
    }

    FunctionDecl* take(UnitDecls& d, const std::string& name) {
        for (auto& f : d.functions)
            if (f.name == name) return &f;
        return nullptr;
    }

    void absorb(UnitDecls&& d) {
        for (auto& s : d.structs) merge_struct(std::move(s));

        // Kernel scalar parameters travel as cgl_param_* uniforms.
        std::vector<GlobalDecl> scalars;
        for (auto& g : d.globals) {
            if (g.name.rfind("cgl_param_", 0) == 0)
                scalars.push_back(std::move(g));
            else
                merge_global(std::move(g));
        }

        FunctionDecl* inner = take(d, "cgl_main");
        FunctionDecl* wrapper = take(d, "main");

        for (auto& f : d.functions) {
            if (&f == inner || &f == wrapper) continue;
            merge_function(std::move(f));
        }

        if (inner) {
            // A unit produced by this repository's backend: the inner
            // function is the original entry point; the wrapper and the
            // stage-IO globals are emission artifacts.
            FunctionDecl entry = std::move(*inner);
            entry.name = "main";
            entry.stage = d.stage;
            if (d.stage == Stage::Vertex && entry.return_type.is_named()) {
                if (const StructDecl* out = module.find_struct(entry.return_type.name)) {
                    vertex_output = out;
                    if (const StructMember* clip = find_clip_member(*out))
                        vertex_clip_member = clip->name;
                }
            }
            merge_function(std::move(entry));
            return;
        }

        if (!wrapper) {
            if (d.stage == Stage::Compute)
                throw UnsupportedConstruct({}, "compute unit has no main function");
            return; // declaration-only unit
        }

        switch (d.stage) {
        case Stage::Compute: absorb_compute(d, std::move(*wrapper), scalars); break;
        case Stage::Vertex: absorb_vertex(d, std::move(*wrapper)); break;
        default: absorb_fragment(d, std::move(*wrapper)); break;
        }
    }

    void absorb_compute(UnitDecls& d, FunctionDecl main_fn,
                        std::vector<GlobalDecl>& scalars) {
        FunctionDecl entry = std::move(main_fn);
        entry.stage = Stage::Compute;
        entry.return_type = Type::void_();
        std::map<std::string, std::string> renames;
        for (auto& b : d.buffers) entry.params.push_back({b.name, std::move(b.type), {}, {}});
        for (auto& s : scalars) {
            std::string param = s.name.substr(std::string("cgl_param_").size());
            renames[s.name] = param;
            entry.params.push_back({param, s.type, {}, {}});
        }
        rewrite_function(entry, rename_vars(std::move(renames)));
        rewrite_function(entry, map_gl_compute_builtin);
        merge_function(std::move(entry));
    }

    void absorb_vertex(UnitDecls& d, FunctionDecl main_fn) {
        if (d.ins.empty())
            throw UnsupportedConstruct(main_fn.loc,
                                       "vertex unit without vertex inputs");
        StructDecl input;
        input.name = "VertexInput";
        for (const auto& v : d.ins) input.members.push_back({v.name, v.type, v.loc});
        merge_struct(input);

        StructDecl output;
        output.name = "VertexOutput";
        for (const auto& v : d.outs) output.members.push_back({v.name, v.type, v.loc});
        bool has_position_out = false;
        for (const auto& v : d.outs)
            if (v.name == "position") has_position_out = true;
        std::string clip = has_position_out ? "clipPosition" : "position";
        output.members.push_back({clip, Type::vec(4), {}});
        merge_struct(output);
        vertex_output = module.find_struct("VertexOutput");
        vertex_clip_member = clip;

        FunctionDecl entry = std::move(main_fn);
        entry.stage = Stage::Vertex;
        entry.params.push_back({"input", Type::named("VertexInput"), {}, {}});
        entry.return_type = Type::named("VertexOutput");

        std::set<std::string> in_names, out_names;
        for (const auto& v : d.ins) in_names.insert(v.name);
        for (const auto& v : d.outs) out_names.insert(v.name);
        rewrite_function(entry, pack_into_record(in_names, "input"));
        out_names.insert("gl_Position");
        rewrite_function(entry, [&](const Expr& e) -> ExprPtr {
            if (e.kind != ExprKind::VarRef) return nullptr;
            if (e.text == "gl_Position")
                return Expr::member(Expr::var_ref("output", e.loc), clip, e.loc);
            if (out_names.count(e.text))
                return Expr::member(Expr::var_ref("output", e.loc), e.text, e.loc);
            return nullptr;
        });
        finish_entry_body(entry, "output", Type::named("VertexOutput"));
        merge_function(std::move(entry));
    }

    void absorb_fragment(UnitDecls& d, FunctionDecl main_fn) {
        FunctionDecl entry = std::move(main_fn);
        entry.stage = Stage::Fragment;

        // Pair fragment `in`s with the vertex output record by name when one
        // exists; otherwise synthesize a record (or use the single-vector
        // scalar form).
        bool paired = vertex_output != nullptr && !d.ins.empty();
        if (paired)
            for (const auto& v : d.ins)
                if (!vertex_output->find_member(v.name)) paired = false;

        std::set<std::string> in_names;
        for (const auto& v : d.ins) in_names.insert(v.name);

        if (paired) {
            entry.params.push_back({"input", Type::named(vertex_output->name), {}, {}});
            rewrite_function(entry, pack_into_record(in_names, "input"));
        } else if (d.ins.size() == 1 && d.ins[0].type.is_vector()) {
            entry.params.push_back({d.ins[0].name, d.ins[0].type, {}, {}});
        } else if (!d.ins.empty()) {
            StructDecl input;
            input.name = "FragmentInput";
            for (const auto& v : d.ins) input.members.push_back({v.name, v.type, v.loc});
            merge_struct(input);
            entry.params.push_back({"input", Type::named("FragmentInput"), {}, {}});
            rewrite_function(entry, pack_into_record(in_names, "input"));
        } else {
            throw UnsupportedConstruct(entry.loc, "fragment unit without inputs");
        }

        if (d.outs.size() == 1 && d.outs[0].type == Type::vec(4)) {
            entry.return_type = Type::vec(4);
            finish_entry_body(entry, d.outs[0].name, Type::vec(4));
        } else if (!d.outs.empty()) {
            StructDecl output;
            output.name = "FragmentOutput";
            for (const auto& v : d.outs) output.members.push_back({v.name, v.type, v.loc});
            merge_struct(output);
            entry.return_type = Type::named("FragmentOutput");
            std::set<std::string> out_names;
            for (const auto& v : d.outs) out_names.insert(v.name);
            rewrite_function(entry, pack_into_record(out_names, "output"));
            finish_entry_body(entry, "output", Type::named("FragmentOutput"));
        } else {
            throw UnsupportedConstruct(entry.loc, "fragment unit without outputs");
        }
        merge_function(std::move(entry));
    }

    // Declares the result variable up front, turns bare returns into
    // `return <var>`, and appends a final return.
    void finish_entry_body(FunctionDecl& entry, const std::string& var, Type type) {
        std::vector<StmtPtr> body;
        body.push_back(Stmt::var_decl(var, std::move(type), nullptr));
        for (auto& s : entry.body) body.push_back(std::move(s));
        entry.body = std::move(body);
        fix_returns(entry.body, var);
        bool ends_with_return =
            !entry.body.empty() && entry.body.back()->kind == StmtKind::Return;
        if (!ends_with_return) entry.body.push_back(Stmt::ret(Expr::var_ref(var)));
    }

    static void fix_returns(std::vector<StmtPtr>& body, const std::string& var) {
        for (auto& s : body) {
            if (s->kind == StmtKind::Return && !s->expr) s->expr = Expr::var_ref(var);
            if (s->init) {
                std::vector<StmtPtr> one;
                one.push_back(std::move(s->init));
                fix_returns(one, var);
                s->init = std::move(one[0]);
            }
            fix_returns(s->body, var);
            fix_returns(s->else_body, var);
        }
    }
};

} // namespace

ImportResult import_glsl(const std::vector<GlslUnit>& units, const std::string& module_name) {
    Importer importer;
    importer.module.name = module_name;

    std::vector<UnitDecls> parsed;
    for (const auto& unit : units) {
        auto tokens = tokenize_with_keywords(strip_directives(unit.text), unit.file,
                                             glsl_keywords());
        GlslTopParser parser(tokens);
        try {
            parser.run(unit.stage);
        } catch (const ParseError& e) {
            // Constructs outside the supported subset (switch, discard, ...)
            // surface as parse failures on their keyword.
            for (const char* kw : {"'switch'", "'discard'", "'attribute'", "'varying'",
                                   "'precision'", "'inout'"})
                if (e.found() == kw)
                    throw UnsupportedConstruct(e.location(),
                                               "unsupported GLSL construct " + e.found());
            throw;
        }
        parsed.push_back(std::move(parser.decls));
    }

    // Vertex units first so fragment `in` pairing can see the vertex output.
    std::stable_sort(parsed.begin(), parsed.end(), [](const UnitDecls& a, const UnitDecls& b) {
        return static_cast<int>(a.stage) < static_cast<int>(b.stage);
    });
    for (auto& d : parsed) importer.absorb(std::move(d));

    for (auto& f : importer.module.functions) rewrite_function(f, map_gl_compute_builtin);

    return {std::move(importer.module), std::move(importer.warnings)};
}

} // namespace crossgl
