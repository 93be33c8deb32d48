#include <array>
#include <map>
#include <set>

#include "crossgl/codegen.hpp"
#include "crossgl/semantics.hpp"
#include "emitter_common.hpp"

// HLSL emission, one .hlsl unit. Stage-IO records carry TEXCOORDi semantics
// by member index with SV_Position on the clip member; entry points are
// VSMain/PSMain/CSMain. Uniform globals live in `cbuffer Globals`
// (declaration order), samplers become Texture2D/SamplerState pairs, and
// compute kernel parameters become RWStructuredBuffers plus a per-kernel
// cbuffer, name-prefixed to keep HLSL globals unique.

namespace crossgl {

namespace {

const std::set<std::string>& hlsl_reserved() {
    static const std::set<std::string> words = {
        "sample",   "sampler",  "texture",  "matrix",   "vector", "point",    "line",
        "linear",   "centroid", "cbuffer",  "tbuffer",  "register", "packoffset",
        "static",   "technique", "pass",    "compile",  "discard", "dword",   "half",
        "groupshared", "numthreads", "in",  "out",      "inout",  "uniform",  "switch",
        "case",     "default",  "do",       "double",   "main",   "row_major",
        "column_major", "precise", "shared", "volatile", "string"};
    return words;
}

struct HlslEmitter : CEmitter {
    const FunctionDecl* current_kernel = nullptr;
    // Per-role stage-IO structs.
    std::set<std::string> vertex_input_structs;
    std::set<std::string> varying_structs;
    std::set<std::string> fragment_out_structs;
    std::array<int, 3> current_numthreads = {1, 1, 1};

    using CEmitter::CEmitter;

    std::string type_name(const Type& t) override { return map_type(t, TargetLanguage::HLSL); }

    std::string ident(const std::string& name) override {
        if (hlsl_reserved().count(name)) return name + "_";
        return name;
    }

    std::string var_ref(const Expr& e) override {
        if (current_kernel) {
            if (is_compute_builtin(e.text)) {
                std::string source = e.text.substr(0, e.text.find_last_of('_'));
                size_t axis = e.text.back() == 'x' ? 0 : e.text.back() == 'y' ? 1 : 2;
                if (source == "thread_id")
                    return std::string("int(cgl_gtid.") + e.text.back() + ")";
                if (source == "block_id")
                    return std::string("int(cgl_gid.") + e.text.back() + ")";
                return std::to_string(current_numthreads[axis]); // numthreads is static
            }
            for (const auto& p : current_kernel->params)
                if (p.name == e.text) return kernel_param_name(*current_kernel, p.name);
        }
        return ident(e.text);
    }

    static std::string kernel_param_name(const FunctionDecl& kernel, const std::string& p) {
        return kernel.name + "_" + p;
    }

    std::string call_expr(const Expr& e) override {
        if (!module.find_function(e.text)) {
            if (e.text == "texture") {
                if (e.args[0]->kind != ExprKind::VarRef)
                    throw UnsupportedConstruct(e.loc,
                                               "texture() needs a sampler global in HLSL");
                std::string s = ident(e.args[0]->text);
                return s + ".Sample(" + s + "_sampler, " + expr(*e.args[1]) + ")";
            }
            if (e.text == "mix") return "lerp(" + call_args(e) + ")";
            if (e.text == "fract") return "frac(" + call_args(e) + ")";
        } else {
            // mat*vec in HLSL spells mul(); plain operators elsewhere.
        }
        return CEmitter::call_expr(e);
    }

    std::string binary_expr(const Expr& e) override {
        // HLSL's * on matrices is componentwise; linear-algebra products need
        // mul(), with the left operand staying on the left.
        if (e.text == "*" && e.args[0]->type && e.args[1]->type) {
            const Type& lt = *e.args[0]->type;
            const Type& rt = *e.args[1]->type;
            if ((lt.is_matrix() && (rt.is_matrix() || rt.is_vector())) ||
                (lt.is_vector() && rt.is_matrix()))
                return "mul(" + expr(*e.args[0]) + ", " + expr(*e.args[1]) + ")";
        }
        return CEmitter::binary_expr(e);
    }

    std::string semantic_for(const StructDecl& s, size_t index) {
        const StructMember& m = s.members[index];
        if (fragment_out_structs.count(s.name)) return "SV_Target" + std::to_string(index);
        if (varying_structs.count(s.name)) {
            const StructMember* clip = find_clip_member(s);
            if (clip == &m) return "SV_Position";
        }
        return "TEXCOORD" + std::to_string(index);
    }

    void struct_decl(const StructDecl& s) {
        bool io = vertex_input_structs.count(s.name) || varying_structs.count(s.name) ||
                  fragment_out_structs.count(s.name);
        line("struct " + s.name + " {");
        ++depth;
        for (size_t i = 0; i < s.members.size(); ++i) {
            const StructMember& m = s.members[i];
            if (m.type.is_sampler())
                throw UnsupportedConstruct(m.loc,
                                           "sampler members are not supported in HLSL structs");
            std::string decl = declare(m.type, ident(m.name));
            if (io) decl += " : " + semantic_for(s, i);
            line(decl + ";");
        }
        --depth;
        line("};");
        blank();
    }

    void function(const FunctionDecl& f) {
        std::string name = ident(f.name);
        std::string suffix;
        if (f.is_entry_point()) {
            if (f.stage == Stage::Vertex) name = "VSMain";
            if (f.stage == Stage::Fragment) {
                name = "PSMain";
                if (f.return_type == Type::vec(4)) suffix = " : SV_Target";
            }
            if (f.stage == Stage::Compute) name = "CSMain";
        }
        if (f.stage == Stage::Compute) {
            compute_kernel(f, name);
            return;
        }
        std::string head = declare(f.return_type, name) + "(";
        for (size_t i = 0; i < f.params.size(); ++i) {
            head += (i ? ", " : "") + declare(f.params[i].type, ident(f.params[i].name));
            if (f.is_entry_point() && f.params[i].type.is_vector())
                head += " : TEXCOORD0"; // scalar fragment form
        }
        head += ")" + suffix + " {";
        line(head);
        body(f.body);
        line("}");
        blank();
    }

    void compute_kernel(const FunctionDecl& f, const std::string& name) {
        const Attribute* wg = find_attribute(f.attributes, "workgroup_size");
        for (size_t a = 0; a < 3; ++a)
            current_numthreads[a] =
                wg && a < wg->args.size() && wg->args[a].is_int
                    ? static_cast<int>(wg->args[a].int_value)
                    : 1;
        current_kernel = &f;
        line("[numthreads(" + std::to_string(current_numthreads[0]) + ", " +
             std::to_string(current_numthreads[1]) + ", " +
             std::to_string(current_numthreads[2]) + ")]");
        std::string head = "void " + name +
                           "(uint3 cgl_gtid : SV_GroupThreadID, uint3 cgl_gid : SV_GroupID) {";
        line(head);
        body(f.body);
        line("}");
        blank();
        current_kernel = nullptr;
    }
};

} // namespace

std::vector<OutputUnit> generate_hlsl(const ShaderModule& module, const std::string& stem) {
    const std::string s = stem.empty() ? module.name : stem;
    HlslEmitter e(module);

    // Stage-IO struct roles drive semantic annotation.
    for (const auto& f : module.functions) {
        if (!f.is_entry_point()) continue;
        if (f.stage == Stage::Vertex) {
            if (f.params.size() == 1 && f.params[0].type.is_named())
                e.vertex_input_structs.insert(f.params[0].type.name);
            if (f.return_type.is_named()) e.varying_structs.insert(f.return_type.name);
        }
        if (f.stage == Stage::Fragment) {
            if (f.params.size() == 1 && f.params[0].type.is_named())
                e.varying_structs.insert(f.params[0].type.name);
            if (f.return_type.is_named()) e.fragment_out_structs.insert(f.return_type.name);
        }
    }

    e.line("// module " + module.name);
    e.blank();
    for (const auto& st : module.structs) e.struct_decl(st);

    // Globals: samplers pair up, constants are static, the rest share one
    // cbuffer in declaration order.
    std::vector<const GlobalDecl*> cbuffer_globals;
    for (const auto& g : module.globals) {
        if (g.type.is_sampler()) {
            e.line("Texture2D " + e.ident(g.name) + ";");
            e.line("SamplerState " + e.ident(g.name) + "_sampler;");
        } else if (g.qualifier == GlobalQualifier::Const) {
            e.line("static const " + e.declare(g.type, e.ident(g.name)) + " = " +
                   (g.init ? e.expr(*g.init) : "0") + ";");
        } else {
            cbuffer_globals.push_back(&g);
        }
    }
    if (!cbuffer_globals.empty()) {
        e.line("cbuffer Globals : register(b0) {");
        ++e.depth;
        for (const GlobalDecl* g : cbuffer_globals)
            e.line(e.declare(g->type, e.ident(g->name)) + ";");
        --e.depth;
        e.line("};");
    }
    e.blank();

    // Compute kernel parameters surface as prefixed globals.
    int u_register = 0;
    int b_register = 1;
    for (const auto& f : module.functions) {
        if (f.stage != Stage::Compute) continue;
        std::vector<const Param*> scalars;
        for (const auto& p : f.params) {
            if (p.type.is_array()) {
                e.line("RWStructuredBuffer<" + map_type(*p.type.element, TargetLanguage::HLSL) +
                       "> " + HlslEmitter::kernel_param_name(f, p.name) + " : register(u" +
                       std::to_string(u_register++) + ");");
            } else {
                scalars.push_back(&p);
            }
        }
        if (!scalars.empty()) {
            e.line("cbuffer " + f.name + "_params : register(b" + std::to_string(b_register++) +
                   ") {");
            ++e.depth;
            for (const Param* p : scalars)
                e.line(e.declare(p->type, HlslEmitter::kernel_param_name(f, p->name)) + ";");
            --e.depth;
            e.line("};");
        }
    }
    e.blank();

    for (const auto& f : module.functions) e.function(f);
    return {{s + ".hlsl", "hlsl", e.out.str()}};
}

} // namespace crossgl
