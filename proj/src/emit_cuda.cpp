#include <set>

#include "crossgl/codegen.hpp"
#include "crossgl/semantics.hpp"
#include "emitter_common.hpp"

// CUDA C++ emission, one .cu unit. Compute-stage functions become __global__
// kernels; everything else is __device__. Vertex/fragment entries are emitted
// as __device__ helpers (renamed vertex_main / fragment_main) so graphics
// modules still translate. Uniform globals are appended as parameters, to
// kernels by value and to helpers by const reference. A fixed vector-support
// preamble sits between marker comments that the CUDA importer strips.

namespace crossgl {

namespace {

const char* kPreambleBegin = "// --- begin vector support ---";
const char* kPreambleEnd = "// --- end vector support ---";

std::string vector_preamble() {
    std::string s;
    s += std::string(kPreambleBegin) + "\n";
    // Componentwise and scalar-broadcast operators for the CUDA vector types.
    for (int n = 2; n <= 4; ++n) {
        std::string v = "float" + std::to_string(n);
        auto comps = [&](const std::string& pattern) {
            const char* names[] = {"x", "y", "z", "w"};
            std::string out;
            for (int i = 0; i < n; ++i) {
                if (i) out += ", ";
                std::string t = pattern;
                size_t pos;
                while ((pos = t.find('@')) != std::string::npos) t.replace(pos, 1, names[i]);
                out += t;
            }
            return out;
        };
        std::string make = "make_" + v;
        for (const char* op : {"+", "-", "*", "/"}) {
            s += "__device__ inline " + v + " operator" + op + "(" + v + " a, " + v +
                 " b) { return " + make + "(" + comps(std::string("a.@ ") + op + " b.@") +
                 "); }\n";
            s += "__device__ inline " + v + " operator" + op + "(" + v +
                 " a, float b) { return " + make + "(" + comps(std::string("a.@ ") + op + " b") +
                 "); }\n";
            s += "__device__ inline " + v + " operator" + op + "(float a, " + v +
                 " b) { return " + make + "(" + comps(std::string("a ") + op + " b.@") + "); }\n";
        }
        s += "__device__ inline " + v + " operator-(" + v + " a) { return " + make + "(" +
             comps("-a.@") + "); }\n";
        s += "__device__ inline " + v + "& operator+=(" + v + "& a, " + v +
             " b) { a = a + b; return a; }\n";
        s += "__device__ inline " + v + "& operator-=(" + v + "& a, " + v +
             " b) { a = a - b; return a; }\n";
        s += "__device__ inline " + v + "& operator*=(" + v + "& a, " + v +
             " b) { a = a * b; return a; }\n";
        s += "__device__ inline bool operator==(" + v + " a, " + v + " b) { return ";
        {
            const char* names[] = {"x", "y", "z", "w"};
            for (int i = 0; i < n; ++i)
                s += std::string(i ? " && " : "") + "a." + names[i] + " == b." + names[i];
        }
        s += "; }\n";
        s += "__device__ inline float dot(" + v + " a, " + v + " b) { return ";
        {
            const char* names[] = {"x", "y", "z", "w"};
            for (int i = 0; i < n; ++i)
                s += std::string(i ? " + " : "") + "a." + names[i] + " * b." + names[i];
        }
        s += "; }\n";
        s += "__device__ inline float length(" + v + " a) { return sqrtf(dot(a, a)); }\n";
        s += "__device__ inline " + v + " normalize(" + v +
             " a) { return a * (1.0f / length(a)); }\n";
        s += "__device__ inline " + v + " mix(" + v + " a, " + v + " b, float t) { return a * "
             "(1.0f - t) + b * t; }\n";
        s += "__device__ inline " + v + " clamp(" + v + " a, float lo, float hi) { return " +
             make + "(" + comps("fminf(fmaxf(a.@, lo), hi)") + "); }\n";
    }
    s += "__device__ inline float3 cross(float3 a, float3 b) { return make_float3("
         "a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x); }\n";
    s += "__device__ inline float mix(float a, float b, float t) { return a * (1.0f - t) + "
         "b * t; }\n";
    s += "__device__ inline float clamp(float x, float lo, float hi) { return "
         "fminf(fmaxf(x, lo), hi); }\n";
    // Square column-major matrices.
    for (int n = 2; n <= 4; ++n) {
        std::string m = "mat" + std::to_string(n);
        std::string v = "float" + std::to_string(n);
        s += "struct " + m + " { " + v + " c[" + std::to_string(n) + "]; };\n";
        s += "__device__ inline " + m + " make_" + m + "(";
        for (int i = 0; i < n; ++i) s += std::string(i ? ", " : "") + v + " c" + std::to_string(i);
        s += ") { " + m + " r; ";
        for (int i = 0; i < n; ++i)
            s += "r.c[" + std::to_string(i) + "] = c" + std::to_string(i) + "; ";
        s += "return r; }\n";
        s += "__device__ inline " + v + " operator*(" + m + " a, " + v + " b) {\n    " + v +
             " r = a.c[0] * b.x; r = r + a.c[1] * b.y;";
        if (n >= 3) s += " r = r + a.c[2] * b.z;";
        if (n >= 4) s += " r = r + a.c[3] * b.w;";
        s += " return r; }\n";
        s += "__device__ inline " + v + " operator*(" + v + " a, " + m + " b) { return make_" +
             v + "(";
        for (int i = 0; i < n; ++i)
            s += std::string(i ? ", " : "") + "dot(a, b.c[" + std::to_string(i) + "])";
        s += "); }\n";
        s += "__device__ inline " + m + " operator*(" + m + " a, " + m + " b) { " + m + " r; ";
        for (int i = 0; i < n; ++i)
            s += "r.c[" + std::to_string(i) + "] = a * b.c[" + std::to_string(i) + "]; ";
        s += "return r; }\n";
        s += "__device__ inline " + m + " operator*(" + m + " a, float b) { " + m + " r; ";
        for (int i = 0; i < n; ++i)
            s += "r.c[" + std::to_string(i) + "] = a.c[" + std::to_string(i) + "] * b; ";
        s += "return r; }\n";
    }
    s += std::string(kPreambleEnd) + "\n";
    return s;
}

const std::set<std::string>& cuda_reserved() {
    static const std::set<std::string> words = {
        "auto",     "register", "class",    "template", "typename", "this",    "new",
        "delete",   "operator", "private",  "public",   "protected", "static", "virtual",
        "union",    "enum",     "typedef",  "goto",     "long",     "short",   "unsigned",
        "signed",   "double",   "char",     "sizeof",   "namespace", "using",  "friend",
        "inline",   "extern",   "volatile", "mutable",  "switch",   "case",    "default",
        "do",       "main",     "dot",      "cross",    "normalize", "length", "mix",
        "clamp"};
    return words;
}

struct CudaEmitter : CEmitter {
    const FunctionDecl* current_fn = nullptr;
    std::vector<std::string> appended_globals; // uniforms threaded as parameters

    using CEmitter::CEmitter;

    std::string type_name(const Type& t) override { return map_type(t, TargetLanguage::CUDA); }

    std::string ident(const std::string& name) override {
        if (cuda_reserved().count(name)) return name + "_";
        return name;
    }

    std::string var_ref(const Expr& e) override {
        if (is_compute_builtin(e.text)) {
            std::string source = e.text.substr(0, e.text.find_last_of('_'));
            char axis = e.text.back();
            std::string cu = source == "thread_id"  ? "threadIdx"
                             : source == "block_id" ? "blockIdx"
                                                    : "blockDim";
            return std::string("int(") + cu + "." + axis + ")";
        }
        return ident(e.text);
    }

    std::string construct_expr(const Expr& e) override {
        const Type& t = e.ctor_type;
        if (t.is_vector()) {
            std::string make = "make_float" + std::to_string(t.dim);
            // Flatten vector arguments and splats; expressions are pure, so
            // repeating an argument is safe.
            bool needs_flatten = e.args.size() != static_cast<size_t>(t.dim);
            if (!needs_flatten)
                for (const auto& a : e.args)
                    if (a->type && a->type->is_vector()) needs_flatten = true;
            if (!needs_flatten) return make + "(" + call_args(e) + ")";
            std::vector<std::string> comps;
            if (e.args.size() == 1 && e.args[0]->type && e.args[0]->type->is_scalar()) {
                std::string s = sub_expr(*e.args[0], 9);
                for (int i = 0; i < t.dim; ++i) comps.push_back(s);
            } else {
                const char* names[] = {"x", "y", "z", "w"};
                for (const auto& a : e.args) {
                    if (a->type && a->type->is_vector()) {
                        std::string base = sub_expr(*a, 9);
                        for (int i = 0; i < a->type->dim; ++i)
                            comps.push_back(base + "." + names[i]);
                    } else {
                        comps.push_back(expr(*a));
                    }
                }
            }
            std::string out = make + "(";
            for (size_t i = 0; i < comps.size(); ++i) out += (i ? ", " : "") + comps[i];
            return out + ")";
        }
        if (t.is_matrix()) return "make_mat" + std::to_string(t.dim) + "(" + call_args(e) + ")";
        if (t.is_int()) return "int(" + call_args(e) + ")";
        return "float(" + call_args(e) + ")";
    }

    std::string call_expr(const Expr& e) override {
        if (!module.find_function(e.text)) { // builtin spelling
            if (e.text == "texture")
                return "tex2D<float4>(" + sub_expr(*e.args[0], 9) + ", " +
                       sub_expr(*e.args[1], 9) + ".x, " + sub_expr(*e.args[1], 9) + ".y)";
            bool int_args = !e.args.empty() && e.args[0]->type && e.args[0]->type->is_int();
            std::string name = e.text;
            if (name == "max") name = int_args ? "max" : "fmaxf";
            else if (name == "min") name = int_args ? "min" : "fminf";
            else if (name == "abs") name = int_args ? "abs" : "fabsf";
            else if (name == "pow") name = "powf";
            else if (name == "sqrt") name = "sqrtf";
            else if (name == "floor") name = "floorf";
            else if (name == "sin") name = "sinf";
            else if (name == "cos") name = "cosf";
            return name + "(" + call_args(e) + ")";
        }
        // Calls to functions that read uniforms carry them as extra arguments.
        std::string s = ident(e.text) + "(" + call_args(e);
        for (const auto& g : threaded_globals(*module.find_function(e.text)))
            s += std::string(s.back() == '(' ? "" : ", ") + ident(g);
        return s + ")";
    }

    // Uniform/plain globals a function needs, in declaration order.
    std::vector<std::string> threaded_globals(const FunctionDecl& f) {
        std::set<std::string> used = used_globals(module, f);
        std::vector<std::string> ordered;
        for (const auto& g : module.globals)
            if (used.count(g.name)) ordered.push_back(g.name);
        return ordered;
    }

    std::string param_decl(const Param& p, bool kernel) {
        if (p.type.is_array()) return type_name(*p.type.element) + "* " + ident(p.name);
        if (p.type.is_named() && !kernel)
            return "const " + p.type.name + "& " + ident(p.name);
        return declare(p.type, ident(p.name));
    }

    void function(const FunctionDecl& f) {
        bool kernel = f.stage == Stage::Compute;
        std::string name = ident(f.name);
        if (f.is_entry_point()) {
            if (f.stage == Stage::Vertex) name = "vertex_main";
            else if (f.stage == Stage::Fragment) name = "fragment_main";
            else name = "kernel_main"; // `main` is reserved in C++
        }
        std::string head = kernel ? "__global__ void " + name + "("
                                  : "__device__ " + type_name(f.return_type) + " " + name + "(";
        bool first = true;
        for (const auto& p : f.params) {
            head += (first ? "" : ", ") + param_decl(p, kernel);
            first = false;
        }
        for (const auto& g : threaded_globals(f)) {
            const GlobalDecl* decl = module.find_global(g);
            std::string gp = kernel ? declare(decl->type, ident(g))
                                    : "const " + type_name(decl->type) + "& " + ident(g);
            if (decl->type.is_array()) gp = type_name(*decl->type.element) + "* " + ident(g);
            head += (first ? "" : ", ") + gp;
            first = false;
        }
        head += ") {";
        line(head);
        body(f.body);
        line("}");
        blank();
    }
};

} // namespace

std::vector<OutputUnit> generate_cuda(const ShaderModule& module, const std::string& stem) {
    const std::string s = stem.empty() ? module.name : stem;
    CudaEmitter e(module);
    e.line("// module " + module.name);
    e.line("#include <cuda_runtime.h>");
    e.line("#include <math.h>");
    e.blank();
    e.out << vector_preamble();
    e.blank();
    for (const auto& st : module.structs) {
        bool has_sampler = false;
        for (const auto& m : st.members)
            if (m.type.is_sampler()) has_sampler = true;
        if (has_sampler)
            throw UnsupportedConstruct(st.loc,
                                       "sampler members are not supported in CUDA structs");
        e.line("struct " + st.name + " {");
        ++e.depth;
        for (const auto& m : st.members) e.line(e.declare(m.type, e.ident(m.name)) + ";");
        --e.depth;
        e.line("};");
        e.blank();
    }
    for (const auto& g : module.globals) {
        if (g.qualifier == GlobalQualifier::Const) {
            std::string init = g.init ? e.expr(*g.init) : "0";
            if (g.type.is_scalar())
                e.line("constexpr " + e.declare(g.type, e.ident(g.name)) + " = " + init + ";");
            else
                e.line("__device__ const " + e.declare(g.type, e.ident(g.name)) + " = " + init +
                       ";");
        }
        // Uniform and plain globals travel as function parameters.
    }
    e.blank();
    for (const auto& f : module.functions) e.function(f);
    return {{s + ".cu", "cuda", e.out.str()}};
}

} // namespace crossgl
