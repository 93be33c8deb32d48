#include <set>

#include "crossgl/codegen.hpp"
#include "crossgl/semantics.hpp"
#include "emitter_common.hpp"

// GLSL emission, one compilation unit per stage. Entry bodies are kept
// intact inside an inner function named cgl_main; a thin void main() wrapper
// moves data between stage-IO globals and the record types. The GLSL
// importer relies on this naming contract (cgl_main, cgl_in_*, cgl_v_*,
// cgl_out_*, cgl_buf_*) to reconstruct the module.

namespace crossgl {

namespace {

const std::set<std::string>& glsl_reserved() {
    static const std::set<std::string> words = {
        "input",   "output",  "in",        "out",     "inout",   "layout",  "buffer",
        "attribute", "varying", "sample",  "filter",  "discard", "precision", "highp",
        "mediump", "lowp",    "flat",      "smooth",  "switch",  "case",    "default",
        "do",      "double",  "static",    "extern",  "this",    "class",   "union",
        "enum",    "typedef", "template",  "goto",    "inline",  "public",  "namespace",
        "using",   "common",  "active",    "asm",     "long",    "short",   "half",
        "fixed",   "unsigned", "superp",   "texture", "main",    "texelFetch"};
    return words;
}

struct GlslEmitter : CEmitter {
    Stage stage = Stage::None;
    std::map<std::string, std::string> var_renames;

    using CEmitter::CEmitter;

    std::string type_name(const Type& t) override { return map_type(t, TargetLanguage::GLSL); }

    std::string ident(const std::string& name) override {
        if (glsl_reserved().count(name)) return name + "_";
        return name;
    }

    std::string var_ref(const Expr& e) override {
        auto it = var_renames.find(e.text);
        if (it != var_renames.end()) return it->second;
        if (stage == Stage::Compute && is_compute_builtin(e.text)) {
            std::string source = e.text.substr(0, e.text.find_last_of('_'));
            char axis = e.text.back();
            std::string gl = source == "thread_id"  ? "gl_LocalInvocationID"
                             : source == "block_id" ? "gl_WorkGroupID"
                                                    : "gl_WorkGroupSize";
            return std::string("int(") + gl + "." + axis + ")";
        }
        return ident(e.text);
    }

    void struct_decl(const StructDecl& s) {
        line("struct " + s.name + " {");
        ++depth;
        for (const auto& m : s.members) line(declare(m.type, ident(m.name)) + ";");
        --depth;
        line("};");
        blank();
    }

    void global(const GlobalDecl& g) {
        std::string s;
        if (g.qualifier == GlobalQualifier::Uniform) s += "uniform ";
        if (g.qualifier == GlobalQualifier::Const) s += "const ";
        s += declare(g.type, ident(g.name));
        if (g.init) s += " = " + expr(*g.init);
        line(s + ";");
    }

    void function(const FunctionDecl& f, const std::string& name_override = "") {
        std::string head =
            declare(f.return_type, name_override.empty() ? ident(f.name) : name_override) + "(";
        for (size_t i = 0; i < f.params.size(); ++i)
            head += (i ? ", " : "") + declare(f.params[i].type, ident(f.params[i].name));
        head += ") {";
        line(head);
        body(f.body);
        line("}");
        blank();
    }

    void common_decls(const std::vector<std::string>& roots) {
        for (const auto& s : module.structs) struct_decl(s);
        for (const auto& g : module.globals) global(g);
        if (!module.globals.empty()) blank();
        std::set<std::string> reach = reachable_functions(module, roots);
        for (const auto& f : module.functions)
            if (reach.count(f.name) && !(f.is_entry_point() || f.stage == Stage::Compute))
                function(f);
    }
};

int workgroup_size(const FunctionDecl& f, size_t axis) {
    const Attribute* wg = find_attribute(f.attributes, "workgroup_size");
    if (wg && axis < wg->args.size() && wg->args[axis].is_int)
        return static_cast<int>(wg->args[axis].int_value);
    return 1;
}

std::string vertex_unit(const ShaderModule& module, const FunctionDecl& entry) {
    GlslEmitter e(module);
    e.stage = Stage::Vertex;
    e.line("#version 330 core");
    e.blank();
    e.common_decls({entry.name});

    const StructDecl* input = module.find_struct(entry.params[0].type.name);
    const StructDecl* output = module.find_struct(entry.return_type.name);
    for (size_t i = 0; i < input->members.size(); ++i)
        e.line("layout(location = " + std::to_string(i) + ") in " +
               e.declare(input->members[i].type, "cgl_in_" + input->members[i].name) + ";");
    e.blank();
    for (const auto& m : output->members)
        e.line("out " + e.declare(m.type, "cgl_v_" + m.name) + ";");
    e.blank();

    e.function(entry, "cgl_main");

    const StructMember* clip = find_clip_member(*output);
    e.line("void main() {");
    ++e.depth;
    e.line(input->name + " cgl_input;");
    for (const auto& m : input->members)
        e.line("cgl_input." + e.ident(m.name) + " = cgl_in_" + m.name + ";");
    e.line(output->name + " cgl_output = cgl_main(cgl_input);");
    for (const auto& m : output->members)
        e.line("cgl_v_" + m.name + " = cgl_output." + e.ident(m.name) + ";");
    if (clip) e.line("gl_Position = cgl_output." + e.ident(clip->name) + ";");
    --e.depth;
    e.line("}");
    return e.out.str();
}

std::string fragment_unit(const ShaderModule& module, const FunctionDecl& entry) {
    GlslEmitter e(module);
    e.stage = Stage::Fragment;
    e.line("#version 330 core");
    e.blank();
    e.common_decls({entry.name});

    const Param& param = entry.params[0];
    const StructDecl* input =
        param.type.is_named() ? module.find_struct(param.type.name) : nullptr;
    if (input) {
        for (const auto& m : input->members)
            e.line("in " + e.declare(m.type, "cgl_v_" + m.name) + ";");
    } else {
        e.line("in " + e.declare(param.type, "cgl_v_" + param.name) + ";");
    }
    e.blank();

    const StructDecl* output =
        entry.return_type.is_named() ? module.find_struct(entry.return_type.name) : nullptr;
    if (output) {
        for (size_t i = 0; i < output->members.size(); ++i)
            e.line("layout(location = " + std::to_string(i) + ") out " +
                   e.declare(output->members[i].type, "cgl_out_" + output->members[i].name) +
                   ";");
    } else {
        e.line("out vec4 cgl_frag_color;");
    }
    e.blank();

    e.function(entry, "cgl_main");

    e.line("void main() {");
    ++e.depth;
    if (input) {
        e.line(input->name + " cgl_input;");
        for (const auto& m : input->members)
            e.line("cgl_input." + e.ident(m.name) + " = cgl_v_" + m.name + ";");
        if (output) {
            e.line(output->name + " cgl_output = cgl_main(cgl_input);");
            for (const auto& m : output->members)
                e.line("cgl_out_" + m.name + " = cgl_output." + e.ident(m.name) + ";");
        } else {
            e.line("cgl_frag_color = cgl_main(cgl_input);");
        }
    } else {
        if (output) {
            e.line(output->name + " cgl_output = cgl_main(cgl_v_" + param.name + ");");
            for (const auto& m : output->members)
                e.line("cgl_out_" + m.name + " = cgl_output." + e.ident(m.name) + ";");
        } else {
            e.line("cgl_frag_color = cgl_main(cgl_v_" + param.name + ");");
        }
    }
    --e.depth;
    e.line("}");
    return e.out.str();
}

std::string compute_unit(const ShaderModule& module, const FunctionDecl& kernel) {
    GlslEmitter e(module);
    e.stage = Stage::Compute;
    e.line("#version 430 core");
    e.line("layout(local_size_x = " + std::to_string(workgroup_size(kernel, 0)) +
           ", local_size_y = " + std::to_string(workgroup_size(kernel, 1)) +
           ", local_size_z = " + std::to_string(workgroup_size(kernel, 2)) + ") in;");
    e.blank();
    e.common_decls({kernel.name});

    // Array parameters become SSBOs; scalar parameters become cgl_param_*
    // uniforms so the importer can tell them apart from module uniforms.
    int binding = 0;
    for (const auto& p : kernel.params) {
        if (p.type.is_array()) {
            e.line("layout(std430, binding = " + std::to_string(binding++) +
                   ") buffer cgl_buf_" + p.name + " {");
            ++e.depth;
            e.line(e.declare(p.type, e.ident(p.name)) + ";");
            --e.depth;
            e.line("};");
        } else {
            e.line("uniform " + e.declare(p.type, "cgl_param_" + p.name) + ";");
            e.var_renames[p.name] = "cgl_param_" + p.name;
        }
    }
    if (!kernel.params.empty()) e.blank();

    e.line("void main() {");
    e.body(kernel.body);
    e.line("}");
    return e.out.str();
}

// Library-style unit for modules without any stage entry points.
std::string plain_unit(const ShaderModule& module) {
    GlslEmitter e(module);
    e.line("#version 330 core");
    e.line("// module " + module.name + " (no pipeline stages)");
    e.blank();
    std::vector<std::string> roots;
    for (const auto& f : module.functions) roots.push_back(f.name);
    e.common_decls(roots);
    return e.out.str();
}

} // namespace

std::vector<OutputUnit> generate_glsl(const ShaderModule& module, const std::string& stem) {
    const std::string s = stem.empty() ? module.name : stem;
    std::vector<OutputUnit> units;
    const FunctionDecl* vertex = nullptr;
    const FunctionDecl* fragment = nullptr;
    std::vector<const FunctionDecl*> kernels;
    for (const auto& f : module.functions) {
        if (f.stage == Stage::Vertex && f.is_entry_point()) vertex = &f;
        if (f.stage == Stage::Fragment && f.is_entry_point()) fragment = &f;
        if (f.stage == Stage::Compute) kernels.push_back(&f);
    }
    if (vertex) units.push_back({s + ".vert", "glsl", vertex_unit(module, *vertex)});
    if (fragment) units.push_back({s + ".frag", "glsl", fragment_unit(module, *fragment)});
    for (size_t i = 0; i < kernels.size(); ++i) {
        std::string name = i == 0 ? s + ".comp" : s + "_" + kernels[i]->name + ".comp";
        units.push_back({name, "glsl", compute_unit(module, *kernels[i])});
    }
    if (units.empty()) units.push_back({s + ".glsl", "glsl", plain_unit(module)});
    return units;
}

} // namespace crossgl
